"""Command-line front end.

A thin client of the service layer: every subcommand builds the same
request models the HTTP API accepts and either calls the handlers
in-process (default) or posts them to a running service (``--server``).

Exit codes: 0 success, 1 input validation failure, 2 solver
non-convergence, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serialize
from .errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotRank1,
    SizeCapExceeded,
    SolverDidNotConverge,
)
from .povm import Povm, validate as validate_povm
from .robustness import sdp_problem_dict
from .service import core, models

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_USAGE = 64

_INPUT_ERRORS = (DomainError, DimensionMismatch, NotHermitian, NotRank1, OSError)


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse parser that reports usage errors with exit code 64."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _post(server: str, path: str, payload: dict) -> dict:
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=300.0)
    if resp.status_code == 200:
        return resp.json()
    detail = resp.json().get("detail", resp.text) if resp.content else resp.text
    code = EXIT_VALIDATION if resp.status_code in (400, 422) else EXIT_SOLVER
    raise _CliFailure(code, f"service error {resp.status_code}: {detail}")


def _call(args, path: str, request, response_cls, local_handler):
    if args.server:
        data = _post(args.server, path, request.model_dump(mode="json"))
        return response_cls.model_validate(data)
    return local_handler(request)


def _load_povm(path: str) -> tuple[Povm, models.PovmPayload]:
    text = Path(path).read_text()
    povm = serialize.povm_from_json(text)
    report = validate_povm(povm)
    if not report.ok:
        raise _CliFailure(
            EXIT_VALIDATION,
            f"{path}: not a valid measurement "
            f"(min eigenvalue {min(report.min_eigenvalues):.3e}, "
            f"completeness residual {report.completeness_residual:.3e}, "
            f"zero operators {list(report.zero_operator_indices)})",
        )
    return povm, models.PovmPayload.from_povm(povm)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _machine_output(command: str, inputs: dict, params: dict, results: dict, residuals: dict) -> str:
    doc = {
        "command": command,
        "inputs": inputs,
        "params": params,
        "results": results,
        "residuals": residuals,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_fixture_files(resp: models.FixtureResponse, out_dir: str) -> list[str]:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(resp.files):
        target = directory / name
        with open(target, "w", newline="\n") as fh:
            fh.write(resp.files[name].json_text)
        written.append(str(target))
    return written


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_upsilon(args) -> int:
    _, e_payload = _load_povm(args.e_file)
    _, f_payload = _load_povm(args.f_file)
    req = models.UpsilonRequest(e=e_payload, f=f_payload, p=args.p, method=args.method)
    resp = _call(args, "/upsilon", req, models.UpsilonResponse, core.compute_upsilon)
    if args.format == "json":
        text = _machine_output(
            "upsilon",
            {"e": args.e_file, "f": args.f_file},
            {"p": resp.p, "method": resp.method},
            {"value": resp.value, "per_pair_terms": resp.per_pair_terms},
            {},
        )
    else:
        text = serialize.format_float(resp.value)
    _emit(args, text)
    return EXIT_OK


def _cmd_eta_g(args) -> int:
    e, e_payload = _load_povm(args.e_file)
    f, f_payload = _load_povm(args.f_file)
    if args.dump_sdp:
        with open(args.dump_sdp, "w", newline="\n") as fh:
            json.dump(sdp_problem_dict(e, f), fh, indent=2, sort_keys=True)
            fh.write("\n")
    req = models.EtaGRequest(
        e=e_payload,
        f=f_payload,
        tol=args.tol,
        gap_tol=args.gap_tol,
        max_iterations=args.max_iterations,
    )
    resp = _call(args, "/eta-g", req, models.EtaGResponse, core.compute_eta_g)
    if args.format == "json":
        text = _machine_output(
            "eta-g",
            {"e": args.e_file, "f": args.f_file},
            {"tol": args.tol, "gap_tol": args.gap_tol},
            {
                "eta": resp.eta,
                "trace_n": resp.trace_n,
                "gap": resp.gap,
                "universal_lower_bound": resp.universal_lower_bound,
                "converged": resp.converged,
                "status": resp.status,
                "iterations": resp.iterations,
            },
            {
                "primal": resp.primal_residuals.model_dump(),
                "dual": resp.dual_residuals.model_dump(),
            },
        )
    else:
        text = serialize.format_float(resp.eta)
    _emit(args, text)
    if not resp.converged:
        print(f"solver did not converge (status {resp.status})", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_certify(args) -> int:
    _, e_payload = _load_povm(args.e_file)
    _, f_payload = _load_povm(args.f_file)
    req = models.CertifyRequest(e=e_payload, f=f_payload, p=args.p, cert_tol=args.cert_tol)
    resp = _call(args, "/certify", req, models.CertifyResponse, core.compute_certify)
    if args.format == "json":
        text = _machine_output(
            "certify",
            {"e": args.e_file, "f": args.f_file},
            {"p": args.p, "cert_tol": args.cert_tol},
            resp.model_dump(),
            {},
        )
    else:
        lines = [
            f"is_maximal {str(resp.is_maximal).lower()}",
            f"rank1_ok {str(resp.rank1_ok).lower()}",
            f"overlap_deviation {serialize.format_float(resp.overlap_deviation)}",
            f"max_value {serialize.format_float(resp.max_value)}",
        ]
        if resp.upsilon_value is not None:
            lines.append(f"upsilon {serialize.format_float(resp.upsilon_value)}")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def _cmd_mub(args) -> int:
    req = models.FixtureRequest(kind="mub-pair", dim=args.dim)
    resp = _call(args, "/fixtures", req, models.FixtureResponse, core.compute_fixtures)
    for path in _write_fixture_files(resp, args.out_dir):
        print(path)
    return EXIT_OK


def _cmd_random(args) -> int:
    kind = {"basis": "random-basis", "rank1": "random-rank1"}[args.kind]
    req = models.FixtureRequest(kind=kind, dim=args.dim, n=args.n, seed=args.seed)
    resp = _call(args, "/fixtures", req, models.FixtureResponse, core.compute_fixtures)
    for path in _write_fixture_files(resp, args.out_dir):
        print(path)
    return EXIT_OK


def _cmd_preprocess_demo(args) -> int:
    req = models.PreprocessDemoRequest(p=args.p)
    resp = _call(
        args, "/preprocess-demo", req, models.PreprocessDemoResponse, core.compute_preprocess_demo
    )
    if args.out_dir:
        for kind in ("paper-qutrit-EF", "paper-kraus-channel"):
            fixture_req = models.FixtureRequest(kind=kind)
            fixture_resp = _call(
                args, "/fixtures", fixture_req, models.FixtureResponse, core.compute_fixtures
            )
            for path in _write_fixture_files(fixture_resp, args.out_dir):
                print(path)
    if args.format == "json":
        text = _machine_output(
            "preprocess-demo",
            {},
            {"p": resp.p},
            {"before": resp.before, "after": resp.after},
            {},
        )
    else:
        text = (
            f"before {serialize.format_float(resp.before)}\n"
            f"after {serialize.format_float(resp.after)}\n"
        )
    _emit(args, text)
    return EXIT_OK


def _cmd_curves(args) -> int:
    req = models.CurvesRequest(
        kind=args.kind, dim=args.dim, p=args.p, grid_n=args.grid_n, c_bar=args.cbar
    )
    resp = _call(args, "/curves", req, models.CurvesResponse, core.compute_curves)
    if args.format == "json":
        text = _machine_output(
            "curves",
            {},
            dict(resp.params, kind=resp.kind, grid_n=args.grid_n),
            {"columns": resp.columns, "rows": resp.rows},
            {},
        )
    else:
        text = resp.csv
    _emit(args, text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    worst = EXIT_OK
    for path in args.files:
        try:
            text = Path(path).read_text()
            povm = serialize.povm_from_json(text)
        except _INPUT_ERRORS as exc:
            print(f"{path} INVALID {exc}")
            worst = EXIT_VALIDATION
            continue
        req = models.ValidateRequest(povm=models.PovmPayload.from_povm(povm))
        resp = _call(args, "/validate", req, models.ValidateResponse, core.compute_validate)
        if args.format == "json":
            print(
                _machine_output(
                    "validate",
                    {"file": path},
                    {},
                    resp.model_dump(),
                    {
                        "min_eigenvalues": resp.min_eigenvalues,
                        "completeness_residual": resp.completeness_residual,
                    },
                ),
                end="",
            )
        elif resp.ok:
            print(f"{path} ok")
        else:
            print(
                f"{path} INVALID min_eigenvalue={min(resp.min_eigenvalues):.3e} "
                f"completeness_residual={resp.completeness_residual:.3e} "
                f"zero_operators={resp.zero_operator_indices}"
            )
        if not resp.ok:
            worst = EXIT_VALIDATION
    return worst


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qincompat", description=__doc__)
    parser.add_argument("--server", default=None, help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, fmt_choices=("json",)):
        p.add_argument("--format", choices=fmt_choices, default=None, help="machine-readable output format")
        p.add_argument("--out", default=None, help="write the output to this path instead of stdout")

    p = sub.add_parser("upsilon", help="incompatibility of a measurement pair")
    p.add_argument("e_file")
    p.add_argument("f_file")
    p.add_argument("--p", default="1", help="Schatten exponent, a real >= 1 or 'inf'")
    p.add_argument("--method", choices=("dense", "rank1"), default="dense")
    add_common(p)
    p.set_defaults(func=_cmd_upsilon)

    p = sub.add_parser("eta-g", help="generalized incompatibility robustness (SDP)")
    p.add_argument("e_file")
    p.add_argument("f_file")
    p.add_argument("--tol", type=float, default=1e-8, help="constraint residual tolerance")
    p.add_argument("--gap-tol", type=float, default=1e-6, help="duality gap tolerance")
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--dump-sdp", default=None, help="also write the SDP in portable JSON form")
    add_common(p)
    p.set_defaults(func=_cmd_eta_g)

    p = sub.add_parser("certify", help="certify a pair as maximally incompatible")
    p.add_argument("e_file")
    p.add_argument("f_file")
    p.add_argument("--p", default="1")
    p.add_argument("--cert-tol", type=float, default=1e-7)
    add_common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("mub", help="write a mutually unbiased basis pair as fixtures")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_mub)

    p = sub.add_parser("random", help="write random measurement fixtures")
    p.add_argument("--kind", choices=("basis", "rank1"), required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="outcome count (rank1 kind)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_random)

    p = sub.add_parser(
        "preprocess-demo",
        help="commuting pair made incompatible by unital pre-processing",
    )
    p.add_argument("--p", default="1")
    p.add_argument("--out-dir", default=None, help="also write the built-in fixture files here")
    add_common(p)
    p.set_defaults(func=_cmd_preprocess_demo)

    p = sub.add_parser("curves", help="emit analytic curve data as CSV")
    p.add_argument("kind", choices=("uncertainty", "qrac", "h_p"))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--p", default="1")
    p.add_argument("--grid-n", type=int, default=101)
    p.add_argument("--cbar", type=float, default=None, help="expansion point for the h_p envelopes")
    add_common(p, fmt_choices=("json", "csv"))
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("validate", help="validate measurement files")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=("json",), default=None)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except SolverDidNotConverge as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SOLVER
    except SizeCapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except _INPUT_ERRORS as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
