"""
Integer arithmetic coding against a fixed frequency table

Classic 32-bit range arithmetic with carry-free renormalisation (pending
underflow bits). Bitstreams are '0'/'1' strings.
"""
from bisect import bisect_right
from typing import Iterable, List, Sequence

import numpy as np

PRECISION = 32
FULL = (1 << PRECISION) - 1
HALF = 1 << (PRECISION - 1)
QUARTER = 1 << (PRECISION - 2)
THREE_QUARTERS = 3 * QUARTER

# Frequency totals must stay below QUARTER so every interval keeps a nonzero width
FREQUENCY_TOTAL = 1 << 24


class FrequencyTable:
    """Cumulative integer frequencies; every symbol gets at least count 1"""

    def __init__(self, probabilities: Sequence[float], total: int = FREQUENCY_TOTAL):
        probabilities = np.asarray(probabilities, dtype=float)
        if probabilities.ndim != 1 or probabilities.size == 0:
            raise ValueError("need a non-empty 1-D probability vector")
        if np.any(probabilities < 0):
            raise ValueError("probabilities must be nonnegative")
        if total >= QUARTER:
            raise ValueError("frequency total must stay below 2^30")
        if probabilities.size > total:
            raise ValueError("more symbols than frequency slots")
        spare = total - probabilities.size
        weights = probabilities / probabilities.sum()
        counts = 1 + np.floor(weights * spare).astype(np.int64)
        self.cumulative: List[int] = [0] + np.cumsum(counts).tolist()
        self.total = self.cumulative[-1]

    def __len__(self) -> int:
        return len(self.cumulative) - 1

    def interval(self, symbol: int):
        return self.cumulative[symbol], self.cumulative[symbol + 1]

    def symbol_for(self, target: int) -> int:
        return bisect_right(self.cumulative, target) - 1


class ArithmeticEncoder:
    def __init__(self, table: FrequencyTable):
        self.table = table
        self.low = 0
        self.high = FULL
        self.pending = 0
        self.bits: List[str] = []

    def _emit(self, bit: str) -> None:
        self.bits.append(bit)
        opposite = "0" if bit == "1" else "1"
        self.bits.extend(opposite * self.pending)
        self.pending = 0

    def encode(self, symbol: int) -> None:
        cum_lo, cum_hi = self.table.interval(symbol)
        span = self.high - self.low + 1
        self.high = self.low + span * cum_hi // self.table.total - 1
        self.low = self.low + span * cum_lo // self.table.total
        while True:
            if self.high < HALF:
                self._emit("0")
            elif self.low >= HALF:
                self._emit("1")
                self.low -= HALF
                self.high -= HALF
            elif self.low >= QUARTER and self.high < THREE_QUARTERS:
                self.pending += 1
                self.low -= QUARTER
                self.high -= QUARTER
            else:
                break
            self.low = 2 * self.low
            self.high = 2 * self.high + 1

    def finish(self) -> str:
        """Flush two disambiguating bits and return the whole stream"""
        self.pending += 1
        self._emit("0" if self.low < QUARTER else "1")
        return "".join(self.bits)


class ArithmeticDecoder:
    def __init__(self, table: FrequencyTable, bits: str):
        self.table = table
        self.bits = bits
        self.position = 0
        self.low = 0
        self.high = FULL
        self.value = 0
        for _ in range(PRECISION):
            self.value = 2 * self.value + self._next_bit()

    def _next_bit(self) -> int:
        # Past the end of the stream reads as zeros
        bit = 1 if self.position < len(self.bits) and self.bits[self.position] == "1" else 0
        self.position += 1
        return bit

    def decode(self) -> int:
        span = self.high - self.low + 1
        target = ((self.value - self.low + 1) * self.table.total - 1) // span
        symbol = self.table.symbol_for(target)
        cum_lo, cum_hi = self.table.interval(symbol)
        self.high = self.low + span * cum_hi // self.table.total - 1
        self.low = self.low + span * cum_lo // self.table.total
        while True:
            if self.high < HALF:
                pass
            elif self.low >= HALF:
                self.value -= HALF
                self.low -= HALF
                self.high -= HALF
            elif self.low >= QUARTER and self.high < THREE_QUARTERS:
                self.value -= QUARTER
                self.low -= QUARTER
                self.high -= QUARTER
            else:
                break
            self.low = 2 * self.low
            self.high = 2 * self.high + 1
            self.value = 2 * self.value + self._next_bit()
        return symbol


def encode_symbols(table: FrequencyTable, symbols: Iterable[int]) -> str:
    encoder = ArithmeticEncoder(table)
    for symbol in symbols:
        encoder.encode(int(symbol))
    return encoder.finish()


def decode_symbols(table: FrequencyTable, bits: str, count: int) -> List[int]:
    decoder = ArithmeticDecoder(table, bits)
    return [decoder.decode() for _ in range(count)]
