"""Batch command-line front end.

Exit codes: 0 success, 1 verification failed, 2 invalid input,
3 a theorem-forbidden branch was reached (an implementation bug).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable

from . import certify, coarse, dichotomy, generate, jsonio
from .box import BoxShape, CellSet
from .coarse import AbstractCover, Entourage, GroundSet
from .dichotomy import Cover
from .errors import InternalContradiction, InvalidInputError, ResourceLimitError

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_CONTRADICTION = 0, 1, 2, 3

log = logging.getLogger("coarsehex")


class _Result:
    def __init__(self, payload: Any, status: int = EXIT_OK):
        self.payload = payload
        self.status = status


def _input(args: argparse.Namespace, schema: str | None) -> Any:
    if not args.input:
        raise InvalidInputError("--input is required")
    return jsonio.load(args.input, schema)


def _cmd_dichotomy(args):
    cov = Cover.from_json(_input(args, "cover"))
    return _Result(dichotomy.dichotomy(cov).to_json())


def _cmd_hex(args):
    cov = Cover.from_json(_input(args, "cover"))
    return _Result(dichotomy.hex_corollary_check(cov).to_json())


def _cmd_components(args):
    obj = _input(args, None)
    if "members" in obj:
        jsonio.validate(obj, "cover")
        cov = Cover.from_json(obj)
        return _Result({
            "members": {
                mid: [p.to_json()["cells"] for p in dichotomy.chain_components(cs)]
                for mid, cs in cov.members.items()
            }
        })
    jsonio.validate(obj, "cellset")
    parts = dichotomy.chain_components(CellSet.from_json(obj))
    return _Result({"components": [p.to_json()["cells"] for p in parts]})


def _cmd_multiplicity(args):
    obj = _input(args, None)
    if "entourage" in obj:
        jsonio.validate(obj, "multiplicity_job")
        E = Entourage.from_json(obj["entourage"])
        count, where = coarse.cover_multiplicity(E, AbstractCover.from_json(obj["cover"]))
        return _Result({"count": count, "location": coarse.thaw_label(where)})
    jsonio.validate(obj, "cover")
    cov = Cover.from_json(obj)
    res = dichotomy.unit_multiplicity(cov)
    out = {
        "n": cov.n,
        "count": res.count,
        "cube": res.cube.to_json(),
        "touched_ids": list(res.touched_ids),
    }
    if args.oracle:
        out["oracle"] = dichotomy.brute_force_report(cov, cap=args.cap).to_json()
    return _Result(out)


def _cmd_zero_dim(args):
    obj = _input(args, "zero_dim_job")
    E = Entourage.from_json(obj["entourage"])
    out: dict[str, Any] = {"cover": certify.zero_dim_cover(E).to_json()}
    status = EXIT_OK
    if "bound" in obj:
        check = certify.zero_dim_check_at_scale(E, Entourage.from_json(obj["bound"]))
        out["check"] = check.to_json()
        status = EXIT_OK if check else EXIT_FAILED
    return _Result(out, status)


def _cmd_ebox_verify(args):
    obj = _input(args, "ebox_job")
    f = certify.EBoxMap.from_json(obj["ebox"])
    check = certify.validate_ebox(f, Entourage.from_json(obj["entourage"]))
    return _Result(check.to_json(), EXIT_OK if check else EXIT_FAILED)


def _cmd_product_demo(args):
    obj = _input(args, "product_demo_job")
    chains = []
    for ch in obj["chains"]:
        space = GroundSet.from_json(ch["space"])
        scale = Entourage.from_json(ch["scale"])
        chains.append(certify.ChainSpec(space, tuple(coarse.freeze_label(p) for p in ch["points"]), scale))
    bounds = [Entourage.from_json(b) for b in obj["bounds"]]
    verdict = certify.theorem1_demo(chains, AbstractCover.from_json(obj["cover"]), bounds)
    return _Result(verdict.to_json())


def _cmd_zn_demo(args):
    obj = _input(args, "zn_demo_job")
    cfg = certify.ZnActionConfig.from_json(obj["config"])
    if "cover" not in obj:
        return _Result(certify.zn_action_ebox(cfg).to_json())
    if "bound" not in obj:
        raise InvalidInputError("zn-demo with a cover also needs a 'bound' entourage")
    verdict = certify.theorem2_demo(
        cfg, AbstractCover.from_json(obj["cover"]), Entourage.from_json(obj["bound"])
    )
    return _Result(verdict.to_json())


def _cmd_verify(args):
    if not args.certificate:
        raise InvalidInputError("--certificate is required")
    raw = jsonio.load(args.certificate)
    if isinstance(raw, dict) and "branch" in raw:
        jsonio.validate(raw, "verdict")
        cov = Cover.from_json(raw["box_cover"])
        cert_obj = raw["certificate"]
    else:
        cov = Cover.from_json(_input(args, "cover"))
        jsonio.validate(raw, "certificate")
        cert_obj = raw
    check = dichotomy.verify_certificate(cov, dichotomy.certificate_from_json(cert_obj))
    return _Result(check.to_json(), EXIT_OK if check else EXIT_FAILED)


def _cmd_generate(args):
    if not args.shape:
        raise InvalidInputError("--shape is required")
    try:
        shape = BoxShape(tuple(int(v) for v in args.shape.split(",")))
    except ValueError as exc:
        raise InvalidInputError(f"bad --shape {args.shape!r}") from exc
    meta: dict[str, Any] = {"generator": args.kind, "seed": args.seed}
    if args.kind == "random-cover":
        cov = generate.random_cover(shape, args.members, args.seed, args.overlap)
        meta.update(members=args.members, overlap=args.overlap)
    elif args.kind == "partition-cover":
        cov = generate.partition_cover(shape, args.members, args.seed)
        meta.update(members=args.members)
    else:
        cov = generate.grid_cover(shape, args.side)
        meta.update(side=args.side)
    return _Result({**cov.to_json(), "meta": meta})


COMMANDS: dict[str, Callable[[argparse.Namespace], _Result]] = {
    "dichotomy": _cmd_dichotomy,
    "hex": _cmd_hex,
    "components": _cmd_components,
    "multiplicity": _cmd_multiplicity,
    "zero-dim": _cmd_zero_dim,
    "ebox-verify": _cmd_ebox_verify,
    "product-demo": _cmd_product_demo,
    "zn-demo": _cmd_zn_demo,
    "verify": _cmd_verify,
    "generate": _cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON file")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for generators")
    common.add_argument("--cap", type=int, default=dichotomy.DEFAULT_CAP, help="cell cap for the brute-force oracle")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")

    parser = argparse.ArgumentParser(prog="coarsehex", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "verify":
            p.add_argument("--certificate", help="certificate or verdict JSON to check")
        if name == "multiplicity":
            p.add_argument("--oracle", action="store_true", help="append the brute-force report")
        if name == "generate":
            p.add_argument("kind", choices=["random-cover", "partition-cover", "grid-cover"])
            p.add_argument("--shape", help="comma-separated box sides, e.g. 4,4")
            p.add_argument("--members", type=int, default=2)
            p.add_argument("--overlap", type=float, default=0.0)
            p.add_argument("--side", type=int, default=2)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR)
    try:
        result = COMMANDS[args.command](args)
    except (InvalidInputError, ResourceLimitError) as exc:
        print(f"coarsehex {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalContradiction as exc:
        print(f"coarsehex {args.command}: INTERNAL CONTRADICTION: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    text = jsonio.dumps(result.payload, args.pretty)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if result.status == EXIT_FAILED:
        reason = result.payload.get("reason") or "check failed"
        print(f"coarsehex {args.command}: verification failed: {reason}", file=sys.stderr)
    return result.status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
