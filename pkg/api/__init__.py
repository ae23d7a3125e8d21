# Serverless HTTP endpoints (Vercel)
