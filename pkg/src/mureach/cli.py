"""Command-line client for the service.

By default requests run against the app in process, so no server is needed
and outputs are byte-identical across runs; `--server URL` targets a remote
instance started with `mureach serve`.

Exit codes: 0 success, 1 malformed input or computation error, 2 query
point on the shape.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _fmt_vec(v) -> str:
    return "[" + ",".join(_fmt(x) for x in v) + "]"


def _gradient_json(d: dict) -> str:
    projs = ",".join(_fmt_vec(q) for q in d["projections"])
    return ('{"distance":%s,"grad":%s,"grad_norm":%s,"omega":%s,'
            '"radius":%s,"projections":[%s]}' % (
                _fmt(d["distance"]), _fmt_vec(d["grad"]),
                _fmt(d["grad_norm"]), _fmt_vec(d["omega"]),
                _fmt(d["radius"]), projs))


def _fit_json(d: dict) -> str:
    return ('{"exponent":%s,"log_constant":%s,"constant":%s,"r2":%s,'
            '"d_lo":%s,"d_hi":%s}' % tuple(
                _fmt(d[k]) for k in ("exponent", "log_constant", "constant",
                                     "r2", "d_lo", "d_hi")))


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for on-shape points
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _client(server):
    import httpx
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _shape_payload(spec: str) -> dict:
    payload = {"spec": spec, "cloud_points": None}
    if spec.startswith("cloud:"):
        pts = np.loadtxt(spec.split(":", 1)[1], delimiter=",", ndmin=2)
        payload["cloud_points"] = pts.tolist()
    return payload


def _check(resp) -> dict:
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    sys.stderr.write(f"error: {detail}\n")
    sys.exit(2 if resp.status_code == 409 else 1)


def _load_config(path) -> dict:
    cfg = {}
    if path:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    k, _, v = line.partition("=")
                    cfg[k.strip()] = v.strip()
    return cfg


def _write_out(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = _Parser(prog="mureach")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; in-process "
                             "when omitted")
    parser.add_argument("--config", default=None,
                        help="key=value file overriding estimator knobs")
    parser.add_argument("--seed", type=int, default=None,
                        help="accepted for reproducible sweeps (all "
                             "randomness is already fixed-seed)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker hint for grid sweeps; results are "
                             "identical for any value")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gradient", help="generalized gradient at a point")
    p.add_argument("shape")
    p.add_argument("point", help="comma-separated coordinates")

    p = sub.add_parser("critical", help="critical-function sweep to CSV")
    p.add_argument("shape")
    p.add_argument("d_min", type=float)
    p.add_argument("d_max", type=float)
    p.add_argument("n_bins", type=int)
    p.add_argument("strategy", choices=["grid", "axis"])
    p.add_argument("out")
    p.add_argument("--resolution", type=float, default=None)

    p = sub.add_parser("fit", help="power-law fit of 1 - chi^2 against d")
    p.add_argument("csv_path")
    p.add_argument("d_lo", type=float)
    p.add_argument("d_hi", type=float)

    p = sub.add_parser("mu-reach", help="mu-reach from a fresh sweep")
    p.add_argument("shape")
    p.add_argument("mu", type=float)
    p.add_argument("d_max", type=float)
    p.add_argument("strategy", choices=["grid", "axis"])
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--resolution", type=float, default=None)

    p = sub.add_parser("oracle", help="exact analytic sweep to CSV")
    p.add_argument("alpha", type=float)
    p.add_argument("t_min", type=float)
    p.add_argument("t_max", type=float)
    p.add_argument("n", type=int)
    p.add_argument("out")

    p = sub.add_parser("selftest", help="run the acceptance suite")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    cfg = _load_config(args.config)
    if "resolution" in cfg and hasattr(args, "resolution"):
        args.resolution = float(cfg["resolution"])
    if "bins" in cfg and hasattr(args, "bins"):
        args.bins = int(cfg["bins"])

    if args.cmd == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.cmd == "selftest":
        from .acceptance import run_all
        results = run_all()
        ok = True
        for name, passed, detail in results:
            status = "PASS" if passed else "FAIL"
            print(f"{status} {name}: {detail}")
            ok = ok and passed
        return 0 if ok else 1

    client = _client(args.server)
    if args.cmd == "gradient":
        try:
            point = [float(x) for x in args.point.split(",")]
        except ValueError:
            sys.stderr.write("error: malformed point\n")
            return 1
        data = _check(client.post("/gradient", json={
            "shape": _shape_payload(args.shape), "point": point}))
        print(_gradient_json(data))
    elif args.cmd == "critical":
        data = _check(client.post("/critical", json={
            "shape": _shape_payload(args.shape), "d_min": args.d_min,
            "d_max": args.d_max, "n_bins": args.n_bins,
            "strategy": args.strategy, "resolution": args.resolution}))
        _write_out(args.out, data["csv"])
    elif args.cmd == "fit":
        try:
            with open(args.csv_path) as fh:
                text = fh.read()
        except OSError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 1
        data = _check(client.post("/fit", json={
            "csv": text, "d_lo": args.d_lo, "d_hi": args.d_hi}))
        print(_fit_json(data))
    elif args.cmd == "mu-reach":
        data = _check(client.post("/mu-reach", json={
            "shape": _shape_payload(args.shape), "mu": args.mu,
            "d_min": args.d_max / 50.0, "d_max": args.d_max,
            "n_bins": args.bins, "strategy": args.strategy,
            "resolution": args.resolution}))
        print('{"mu_reach":%s,"censored":%s}' % (
            _fmt(data["mu_reach"]), "true" if data["censored"] else "false"))
    elif args.cmd == "oracle":
        data = _check(client.post("/oracle", json={
            "alpha": args.alpha, "t_min": args.t_min, "t_max": args.t_max,
            "n": args.n}))
        _write_out(args.out, data["csv"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
