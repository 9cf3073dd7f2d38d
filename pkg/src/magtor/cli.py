"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input or
precondition error.  Reports are JSON on stdout unless ``--out`` is given.
"""

import argparse
import csv
import io as _io
import math
import os
import sys

from magtor import classical, core, exact, lattice, normal_form, spectra
from magtor import io as mio
from magtor.demo import run_demo
from magtor.errors import MagtorError, SchemaError

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _cutoff(text):
    """A number, optionally written as a multiple of pi ("25pi")."""
    t = text.strip().lower().replace("*", "")
    try:
        if t.endswith("pi"):
            return float(t[:-2] or 1) * math.pi
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cutoff {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="floating tolerance (default 1e-9)")
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--cutoff", type=_cutoff, default=None, help="energy cutoff, e.g. 31.4 or 10pi")
    common.add_argument("--k-max", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--times", type=_float_list, default=None)
    common.add_argument("--bound", type=float, default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--config", default=None, help="JSON file with tolerance overrides")

    parser = argparse.ArgumentParser(prog="magtor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *files, **kw):
        p = sub.add_parser(name, parents=[common], help=kw.pop("help", None))
        for f in files:
            p.add_argument(f)
        return p

    add("validate", "system", help="check system invariants")
    add("signature", "system", help="d^2 values and symplectic volume")
    p = add("normal-form", "system", help="Chern invariant factors and witness")
    p.add_argument("--allow-reversed", action="store_true", help="accept a det -1 witness")
    add("spectrum", "system", help="Landau levels up to --cutoff")
    add("equiv", "system1", "system2", help="quantum equivalence")
    add("kahler", "system", help="Kaehler test")
    add("reconstruct", "spectrum", help="recover the signature from a spectrum file")
    add("obstruction", "system1", "system2", help="phase-space obstruction from Chern factors")
    p = add("phi", "system", help="build and verify the symplectomorphism Phi")
    p.add_argument("--matrix", help="JSON file with A; default: a random integer symplectic A")
    p = add("deform", "system", help="isospectral deformation family")
    p.add_argument("--generator", required=True, help="JSON file with a symmetric matrix S")
    p = add("flow", "system", help="magnetic flow trajectory as CSV")
    p.add_argument("--state", required=True, help='JSON file {"q": [...], "p": [...]}')
    p = add("lengths", "system", help="truncated length spectrum")
    p.add_argument("--max-count", type=int, default=10000)
    add("demo", help="reproduce the worked examples")
    return parser


def resolve_tol(args):
    tol = core.DEFAULT_TOL
    env = os.environ.get("MAGTOR_TOL")
    if env:
        tol = float(env)
    cfg = {}
    if args.config:
        cfg = mio.load_json(args.config)
        tol = float(cfg.get("tol", tol))
    if args.tol is not None:
        tol = args.tol
    override = cfg.get("commands", {}).get(args.command, {})
    tol = float(override.get("tol", tol))
    if not tol > 0:
        raise SchemaError(f"tolerance must be positive, got {tol}")
    return tol


def _sig_dict(sig):
    v = sig.sympl_volume
    v = int(v) if float(v).is_integer() else v  # exact for integral forms
    return {"d_squared": list(sig.d_squared), "volume": v, "m": sig.m}


def _need(value, flag):
    if value is None:
        raise SchemaError(f"{flag} is required for this command")
    return value


def dispatch(args, tol):
    """Return (exit_code, report) where report is JSON-able or a CSV string."""
    cmd = args.command
    if cmd == "demo":
        ok, report = run_demo(tol)
        return (EXIT_OK if ok else EXIT_NEGATIVE), report

    if cmd == "reconstruct":
        spec = mio.parse_spectrum(mio.load_json(args.spectrum))
        res = spectra.reconstruct_signature(spec)
        report = {**_sig_dict(res.signature), "levels_consumed": res.levels_consumed,
                  "consistent": res.consistent}
        return (EXIT_OK if res.consistent else EXIT_NEGATIVE), report

    if cmd in ("equiv", "obstruction"):
        s1, s2 = mio.parse_system(args.system1), mio.parse_system(args.system2)
        if cmd == "obstruction":
            res = normal_form.phase_space_obstruction(s1.magnetic, s2.magnetic)
            code = EXIT_NEGATIVE if res.verdict is normal_form.Obstruction.NOT_SYMPLECTOMORPHIC else EXIT_OK
            return code, res.as_dict()
        res = spectra.quantum_equivalent(s1, s2, tol)
        g1 = dict(res.data)["signature1"]
        g2 = dict(res.data)["signature2"]
        s1d, s2d = _sig_dict(g1), _sig_dict(g2)
        report = {"equivalent": res.equal, "detail": res.detail,
                  "d_squared": s1d["d_squared"], "volume": s1d["volume"],
                  "d_squared_2": s2d["d_squared"], "volume_2": s2d["volume"]}
        if args.cutoff is not None:
            allk = spectra.all_k_consistency(s1, s2, args.k_max, args.cutoff, tol)
            report["all_k"] = {"k_max": args.k_max, "consistent": allk.equal, "detail": allk.detail}
        return (EXIT_OK if res.equal else EXIT_NEGATIVE), report

    if cmd == "validate":
        s = mio.parse_system(args.system, validate=False)
        report = core.validate_system(s)
        return (EXIT_OK if report.ok else EXIT_ERROR), report.as_dict()

    s = mio.parse_system(args.system)
    if cmd == "signature":
        return EXIT_OK, _sig_dict(core.spectral_signature(s, tol))
    if cmd == "normal-form":
        r, A = normal_form.chern_invariant_factors(s.magnetic, allow_reversed=args.allow_reversed)
        mat = A.matrix if isinstance(A, normal_form.UnimodularTransform) else A
        return EXIT_OK, {"factors": list(r.r), "A": mat.tolist(), "det": int(exact.det(mat))}
    if cmd == "spectrum":
        spec = spectra.landau_spectrum(core.spectral_signature(s, tol), args.k, _need(args.cutoff, "--cutoff"))
        return EXIT_OK, spec.as_dict()
    if cmd == "kahler":
        k = spectra.is_kahler(s, tol)
        return (EXIT_OK if k else EXIT_NEGATIVE), {"kahler": k}
    if cmd == "phi":
        if args.matrix:
            A = mio.parse_matrix(mio.load_json(args.matrix))
        else:
            r, W = normal_form.chern_invariant_factors(s.magnetic, allow_reversed=True)
            W = W.matrix if isinstance(W, normal_form.UnimodularTransform) else W
            B = classical.sample_symplectic_integer(r, args.seed, 6)
            A = classical.symplectic_conjugate(B, W)
        phi = classical.build_phi(A, s.magnetic)
        rep = classical.verify_phi(phi, classical.TwistedForm.from_magnetic(s.magnetic), s.metric)
        report = {"block_qq": phi.block_qq, "block_qp": phi.block_qp, **rep.as_dict()}
        return (EXIT_OK if rep.ok else EXIT_NEGATIVE), report
    if cmd == "deform":
        S = mio.load_json(args.generator)
        S = S["matrix"] if isinstance(S, dict) else S
        times = args.times if args.times is not None else [0.0, 0.5, 1.0]
        fam = classical.DeformationFamily(s.metric, s.magnetic, classical.sp_generator(s.magnetic, S), tuple(times))
        rows = [{"t": t, "metric": h.tolist(), "signature": _sig_dict(g)}
                for t, h, g in zip(times, fam.metrics(), fam.signatures(tol))]
        return EXIT_OK, rows
    if cmd == "flow":
        st = mio.load_json(args.state)
        try:
            state = classical.CotangentState(tuple(map(float, st["q"])), tuple(map(float, st["p"])))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"malformed state: {e}") from e
        times = args.times if args.times is not None else [0.0, 1.0]
        buf = _io.StringIO()
        n = 2 * s.m
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", *(f"q{i + 1}" for i in range(n)), *(f"p{i + 1}" for i in range(n)), "H"])
        for row in classical.trajectory_rows(s, state, times):
            w.writerow([repr(float(x)) for x in row])
        return EXIT_OK, "# " + classical.HAMILTON_CONVENTION + "\n" + buf.getvalue()
    if cmd == "lengths":
        ls = lattice.length_spectrum(s.metric, _need(args.bound, "--bound"), args.max_count)
        return EXIT_OK, {"bound": args.bound, "truncated": ls.truncated,
                         "counts": [[v, n] for v, n in ls.counts()]}
    raise SchemaError(f"unknown command {cmd}")


def run(argv=None, stdout=None):
    """Parse ``argv``, run the command, write the report; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        tol = resolve_tol(args)
        code, report = dispatch(args, tol)
    except MagtorError as e:
        code, report = EXIT_ERROR, {"error": e.name, "message": str(e)}
    text = report if isinstance(report, str) else mio.dumps(report) + "\n"
    if getattr(args, "out", None) and code != EXIT_ERROR:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
