"""Run the model server: python -m modelserver [--port N]."""

import argparse
import os


def main() -> int:
    parser = argparse.ArgumentParser(description="claimnet model server")
    parser.add_argument("--host", default=os.environ.get("MODEL_SERVER_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("MODEL_SERVER_PORT", "8900")))
    parser.add_argument("--backend", choices=("hash", "real"),
                        default=os.environ.get("MODEL_SERVER_BACKEND", "hash"))
    args = parser.parse_args()

    import uvicorn

    from .app import ServerConfig, create_app

    cfg = ServerConfig.from_env()
    cfg.backend = args.backend
    uvicorn.run(create_app(cfg), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
