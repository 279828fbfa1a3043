"""Command-line front end.

Exit status: 0 success, 1 validation failure, 2 parse or usage error,
3 internal invariant violation (a reproduction bundle is written).
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import Any, Callable

from . import __version__, fixtures, io
from .complex import ChainMap, FreeComplex, validate_complex, validate_map
from .homology import homology, localized_rank, predicted_truncated_dims, truncated_dims
from .hypercube import Hyperbox, HyperboxError, compress, validate_hyperbox
from .involutive import (IotaComplex, build_cfi, compose_squares, twist_report,
                         validate_iota_complex)
from .knots import IotaKComplex, validate_iota_k
from .linalg import Matrix
from .report import Report
from .ring import UQ_RING
from .surgery import (SurgeryError, build_cone, build_involutive_cone, cone_summary, j_report,
                      validate_cone)

VERBS = ("check", "homology", "cfi", "twist", "compress", "surgery", "cobordism", "s2xs2")

OK, INVALID, PARSE, INTERNAL = 0, 1, 2, 3


class Outcome:
    """What a verb produced: exit status, text lines and a structured document."""

    def __init__(self, status: int = OK) -> None:
        self.status = status
        self.lines: list[str] = []
        self.doc: dict[str, Any] = {}
        self.reports: list[Report] = []

    def report(self, rep: Report, validator: str) -> Report:
        self.reports.append(rep)
        self.lines.append(f"{rep.subject} ({validator}):")
        self.lines += ["  " + line for line in rep.lines()]
        return rep

    def fail(self, status: int) -> None:
        self.status = max(self.status, status)


class InvariantViolation(RuntimeError):
    def __init__(self, message: str, outcome: Outcome | None = None) -> None:
        super().__init__(message)
        self.outcome = outcome


# -- inputs ----------------------------------------------------------------------------

def parse_input(path: str):
    """Load a file (or the name of a shipped fixture) into a typed value."""
    label, text = fixtures.resolve(path)
    try:
        return io.loads(text)
    except io.ParseError as e:
        e.args = (f"{label}: {e.args[0]}",)
        raise


def _expect(value, kinds: tuple[type, ...], verb: str):
    if not isinstance(value, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise io.ParseError(f"{verb} expects {names}, got {type(value).__name__}")
    return value


# -- verbs -----------------------------------------------------------------------------

def _check_one(value, out: Outcome) -> None:
    if isinstance(value, IotaKComplex):
        rep = out.report(validate_iota_k(value), "knots.validate_iota_k")
        kind = "ι_K-complex" if value.base.ring.kind == "UV" else "ι_L-complex"
        rel = "ι_K² = id+ΦΨ" if value.base.ring.kind == "UV" else "ι_L² = Π(id+Φ_iΨ_i)"
        if rep.ok:
            how = "exactly" if rep.data["exact"] else (
                f"up to homotopy ({rep.data['homotopy'].matrix.nnz()} entries)")
            out.lines.insert(0, f"valid {kind}; {rel} {how}")
        else:
            out.lines.insert(0, f"invalid {kind}")
    elif isinstance(value, IotaComplex):
        rep = out.report(validate_iota_complex(value), "involutive.validate_iota_complex")
        out.lines.insert(0, "valid ι-complex" if rep.ok else "invalid ι-complex")
    elif isinstance(value, Hyperbox):
        rep = out.report(validate_hyperbox(value), "hypercube.validate_hyperbox")
        out.lines.insert(0, f"valid hyperbox of size {list(value.size)}" if rep.ok else "invalid hyperbox")
    elif isinstance(value, ChainMap):
        rep = out.report(validate_map(value), "complex.validate_map")
        rep.extend(validate_complex(value.source), "source: ")
        rep.extend(validate_complex(value.target), "target: ")
        out.lines.insert(0, "valid chain map" if rep.ok else "invalid chain map")
    else:
        rep = out.report(validate_complex(value), "complex.validate_complex")
        out.lines.insert(0, f"valid complex over {value.ring}" if rep.ok else "invalid complex")
    if not rep.ok:
        out.fail(INVALID)
    out.doc = {**io.to_dict(value), "report": rep.to_dict()}


def run_check(args, values) -> Outcome:
    out = Outcome()
    docs = []
    for path, value in zip(args.inputs, values):
        one = Outcome()
        _check_one(value, one)
        if len(values) > 1:
            out.lines.append(f"== {path}")
        out.lines += one.lines
        out.reports += one.reports
        out.fail(one.status)
        docs.append(one.doc)
    out.doc = docs[0] if len(docs) == 1 else {"kind": "batch", "results": docs}
    return out


def _homology_complex(value, verb: str) -> FreeComplex:
    value = _expect(value, (FreeComplex, IotaComplex), verb)
    c = value.base if isinstance(value, IotaComplex) else value
    if c.ring.kind not in ("U", "UQ"):
        raise io.ParseError(f"{verb} needs a complex over F[U] or F[U,Q]/Q^2, got mode {c.ring}")
    return c


def run_homology(args, values) -> Outcome:
    out = Outcome()
    c = _homology_complex(values[0], "homology")
    rep = out.report(validate_complex(c), "complex.validate_complex")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "homology", "report": rep.to_dict()}
        return out
    h = homology(c)
    cross = Report("homology cross-check")
    for delta in (args.delta, args.delta + 2):
        got, want = truncated_dims(c, delta), predicted_truncated_dims(h, delta)
        cross.add(f"Smith decomposition matches brute force mod U^{delta}", got == want)
    out.report(cross, "homology.truncated_dims")
    out.lines.insert(0, f"H = {h.describe()}")
    out.doc = {"kind": "homology", "mode": str(c.ring), **h.to_dict(), "delta": args.delta,
               "report": cross.to_dict()}
    if not cross.ok:
        raise InvariantViolation("graded Smith output disagrees with the truncated brute force", out)
    return out


def _iota(value, verb: str) -> IotaComplex:
    return _expect(value, (IotaComplex,), verb)


def run_cfi(args, values) -> Outcome:
    out = Outcome()
    C = _iota(values[0], "cfi")
    rep = out.report(validate_iota_complex(C), "involutive.validate_iota_complex")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "report", "report": rep.to_dict()}
        return out
    cfi = build_cfi(C, check=False)
    post = Report("CFI")
    post.add("CFI differential squares to zero", cfi.d.compose(cfi.d).is_zero())
    out.report(post, "involutive.build_cfi")
    if not post.ok:
        raise InvariantViolation("the cone of Q(1 + iota) is not a complex", out)
    h = homology(cfi)
    towers = localized_rank(cfi)
    out.lines.insert(0, f"HFI = {h.describe()}; {towers} towers after inverting U")
    out.doc = {**io.to_dict(cfi), "homology": h.to_dict(), "localized_rank": towers,
               "report": post.to_dict()}
    return out


def run_twist(args, values) -> Outcome:
    out = Outcome()
    C = _iota(values[0], "twist")
    rep = out.report(validate_iota_complex(C), "involutive.validate_iota_complex")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "report", "report": rep.to_dict()}
        return out
    tw = out.report(twist_report(C), "involutive.twist_report")
    if not tw.ok:
        raise InvariantViolation("Id + Q Phi fails to be an involutive chain automorphism", out)
    homotopic = tw.data["homotopic_to_identity"]
    out.lines.insert(0, ("Id+QΦ ≃ Id" if homotopic else "Id+QΦ is not homotopic to Id") + "; (Id+QΦ)² = Id")
    out.doc = {**io.to_dict(tw.data["map"]), "homotopic_to_identity": homotopic, "report": tw.to_dict()}
    return out


def _axis_order(raw: str | None, dim: int) -> list[int] | None:
    if raw is None:
        return None
    try:
        order = [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise io.ParseError(f"bad axis order {raw!r}") from None
    if sorted(order) != list(range(dim)):
        raise io.ParseError(f"axis order {order} is not a permutation of 0..{dim - 1}")
    return order


def run_compress(args, values) -> Outcome:
    out = Outcome()
    H = _expect(values[0], (Hyperbox,), "compress")
    order = _axis_order(args.axis_order, H.dim)
    rep = out.report(validate_hyperbox(H), "hypercube.validate_hyperbox")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "report", "report": rep.to_dict()}
        return out
    cube = compress(H, order)
    post = out.report(validate_hyperbox(cube), "hypercube.validate_hyperbox")
    if not post.ok:
        raise InvariantViolation("compression broke the structure relation", out)
    out.lines.insert(0, f"compressed size {list(H.size)} to {list(cube.size)} "
                        f"along axes {cube.metadata['axis_order']}")
    out.doc = {**io.to_dict(cube), "report": post.to_dict()}
    return out


def _knot(value, verb: str) -> IotaKComplex:
    K = _expect(value, (IotaKComplex,), verb)
    if K.base.ring.kind != "UV":
        raise io.ParseError(f"{verb} needs a knot complex (mode UV)")
    return K


def run_surgery(args, values) -> Outcome:
    out = Outcome()
    K = _knot(values[0], "surgery")
    rep = out.report(validate_iota_k(K), "knots.validate_iota_k")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "report", "report": rep.to_dict()}
        return out
    builder = build_involutive_cone if args.involutive else build_cone
    X = builder(K, args.framing, args.bound)
    vrep = out.report(validate_cone(X), "surgery.validate_cone")
    if not vrep.ok:
        raise InvariantViolation("the assembled cone fails its own relations", out)
    summary = cone_summary(X)
    towers = sum(len(v["free_towers"]) for v in summary["spinc"].values())
    head = f"X_{X.framing}: {X.complex.n} generators, bound {X.bound}, {towers} free towers"
    if X.involutive:
        head += (f"; self-conjugate sector {summary['self_conjugate_classes']}: "
                 f"{summary['self_conjugate_towers']} towers, Q-rank {summary['self_conjugate_q_rank']}")
    out.lines.insert(0, head)
    value = IotaComplex(X.complex, X.iota) if X.involutive else X.complex
    out.doc = {**io.to_dict(value), "summary": summary, "report": vrep.to_dict()}
    return out


def run_cobordism(args, values) -> Outcome:
    out = Outcome()
    K = _knot(values[0], "cobordism")
    rep = out.report(validate_iota_k(K), "knots.validate_iota_k")
    if not rep.ok:
        out.fail(INVALID)
        out.doc = {"kind": "report", "report": rep.to_dict()}
        return out
    X = build_involutive_cone(K, args.framing, args.bound)
    out.report(validate_cone(X, check_iota_square=False), "surgery.validate_cone")
    jr = out.report(j_report(X), "surgery.j_report")
    if not out.reports[-2].ok or not jr.ok:
        raise InvariantViolation("the cobordism map J is not a homogeneous chain map", out)
    out.lines.insert(0, f"J: CFI(X_{X.framing}) -> BI_{X.framing // 2} is a chain map; "
                        f"localized rank {jr.data['localized_rank']} of {jr.data['target_rank']}")
    out.doc = {**io.to_dict(jr.data["map"]), "report": jr.to_dict()}
    return out


def run_s2xs2(args, values) -> Outcome:
    out = Outcome()
    w1, w2 = values if values else (fixtures.load("s2xs2_w1.box"), fixtures.load("s2xs2_w2.box"))
    for w in (w1, w2):
        _expect(w, (Hyperbox,), "s2xs2")
        rep = out.report(validate_hyperbox(w), "hypercube.validate_hyperbox")
        if not rep.ok:
            out.fail(INVALID)
    if out.status:
        out.doc = {"kind": "report", "reports": [r.to_dict() for r in out.reports]}
        return out
    order = _axis_order(args.axis_order, 2)
    try:
        cube, F = compose_squares(w1, w2, order)
    except HyperboxError as e:
        raise io.ParseError(f"the two squares do not stack: {e}") from None
    q = UQ_RING.mono(0, q=1)
    n = F.source.n
    is_q = F.source.n == F.target.n and F.matrix == Matrix.identity(UQ_RING, n).scale(q)
    res = Report("composite")
    res.add("compressed cube satisfies the structure relation", validate_hyperbox(cube).ok)
    res.add("composite is a chain map of CFI", F.is_chain_map())
    out.report(res, "involutive.compose_squares")
    if not res.ok:
        raise InvariantViolation("the compressed composite is not a chain map", out)
    if is_q:
        out.lines.insert(0, "composite cobordism map = Q·id")
    else:
        entries = ", ".join(f"{F.source.generators[i].name}->{F.target.generators[j].name}: {c}"
                            for i, j, c in F.matrix.entries())
        out.lines.insert(0, f"composite cobordism map: {entries or '0'}")
    out.doc = {**io.to_dict(F), "is_q_identity": is_q, "report": res.to_dict()}
    return out


RUNNERS: dict[str, Callable] = {
    "check": run_check, "homology": run_homology, "cfi": run_cfi, "twist": run_twist,
    "compress": run_compress, "surgery": run_surgery, "cobordism": run_cobordism, "s2xs2": run_s2xs2,
}


# -- argument handling -------------------------------------------------------------------

def _positive(raw: str) -> int:
    v = int(raw)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonnegative(raw: str) -> int:
    v = int(raw)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _framing(raw: str) -> int:
    v = int(raw)
    if v == 0:
        raise argparse.ArgumentTypeError("framing 0 is not supported")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invfloer", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"invfloer {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomized search")
    common.add_argument("--bundle-dir", default="invfloer-repro",
                        help="where to write a reproduction bundle on an internal error")
    sub = p.add_subparsers(dest="verb", required=True)
    s = sub.add_parser("check", parents=[common], help="validate files or shipped fixtures")
    s.add_argument("inputs", nargs="+")
    s = sub.add_parser("homology", parents=[common], help="graded homology with a brute-force cross-check")
    s.add_argument("inputs", nargs=1)
    s.add_argument("--delta", type=_positive, default=8, help="truncation U^delta for the cross-check")
    s = sub.add_parser("cfi", parents=[common], help="the involutive cone of an iota-complex")
    s.add_argument("inputs", nargs=1)
    s = sub.add_parser("twist", parents=[common], help="the automorphism Id + Q Phi")
    s.add_argument("inputs", nargs=1)
    s = sub.add_parser("compress", parents=[common], help="compress a hyperbox to a hypercube")
    s.add_argument("inputs", nargs=1)
    s.add_argument("--axis-order", help="comma separated axes, compressed first to last")
    s = sub.add_parser("surgery", parents=[common], help="the truncated surgery mapping cone")
    s.add_argument("inputs", nargs=1)
    s.add_argument("--framing", type=_framing, required=True)
    s.add_argument("--bound", type=_nonnegative)
    s.add_argument("--involutive", action="store_true", help="build the involutive cone (even framing)")
    s = sub.add_parser("cobordism", parents=[common], help="the map J to BI_n")
    s.add_argument("inputs", nargs=1)
    s.add_argument("--framing", type=_framing, required=True)
    s.add_argument("--bound", type=_nonnegative)
    s = sub.add_parser("s2xs2", parents=[common], help="compose the two S2xS2 squares")
    s.add_argument("inputs", nargs="*", help="optional replacement squares (first, second)")
    s.add_argument("--axis-order")
    return p


def _validate_options(args) -> None:
    if args.verb in ("surgery", "cobordism"):
        even_needed = args.verb == "cobordism" or args.involutive
        if even_needed and args.framing % 2:
            raise io.ParseError("the involutive cone needs an even framing")
    if args.verb == "s2xs2" and len(args.inputs) not in (0, 2):
        raise io.ParseError("s2xs2 takes no inputs or exactly two squares")


def write_bundle(args, argv: list[str], out: Outcome | None, error: str) -> Path:
    root = Path(args.bundle_dir)
    (root / "inputs").mkdir(parents=True, exist_ok=True)
    for k, path in enumerate(getattr(args, "inputs", []) or []):
        try:
            _, text = fixtures.resolve(path)
        except FileNotFoundError:
            continue
        (root / "inputs" / f"{k}_{Path(path).name}").write_text(text, encoding="utf-8")
    meta = {"argv": argv, "version": __version__, "error": error}
    (root / "command.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    if out is not None:
        (root / "report.txt").write_text("\n".join(out.lines) + "\n", encoding="utf-8")
    return root


def _emit(args, out: Outcome, stream) -> None:
    if args.format == "structured":
        stream.write(io.dumps(out.doc))
    else:
        for line in out.lines:
            stream.write(line + "\n")


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and PARSE
    out = None
    try:
        _validate_options(args)
        values = [parse_input(p) for p in args.inputs]
        out = RUNNERS[args.verb](args, values)
    except FileNotFoundError as e:
        stderr.write(f"invfloer: no such file or fixture: {e.args[0]}\n")
        return PARSE
    except io.ParseError as e:
        stderr.write(f"invfloer: parse error: {e}\n")
        return PARSE
    except SurgeryError as e:
        stderr.write(f"invfloer: {e}\n")
        return INVALID
    except InvariantViolation as e:
        root = write_bundle(args, argv, e.outcome, str(e))
        stderr.write(f"invfloer: internal invariant violated: {e}\nreproduction bundle: {root}\n")
        return INTERNAL
    except Exception as e:  # noqa: BLE001 - any other failure is an engine bug
        root = write_bundle(args, argv, out, traceback.format_exc())
        stderr.write(f"invfloer: internal error: {type(e).__name__}: {e}\nreproduction bundle: {root}\n")
        return INTERNAL
    _emit(args, out, stdout)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
