"""Command-line front end.

Subcommands: classify (invariants of one generator), compare (equivalence
verdict for two generators, optionally batched), enum2 (the 2x2 catalog
with a live pairwise verdict matrix), selftest (special-matrix identity
grids).  Reports are emitted as text or schema-stable JSON; exit codes
are 0 (success), 1 (compare: not equivalent), 2 (input error),
3 (internal consistency failure).
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .canonical import catalog_2x2, descriptor
from .cores import bounded_subspace, core_profile
from .equivalence import smooth_verdict, topological_verdict
from .errors import (
    FieldError,
    InputFormatError,
    InternalConsistencyError,
    LinflowError,
    NonFiniteError,
    NotBoundedError,
    ShapeError,
)
from .formats import digest, load_matrix, matrix_to_document
from .linalg import Tolerance, matexp, realify
from .rational import rational_partition
from .special import delta_matrix, diag_powers, exp_block_partition, recip_gamma
from .spectral import jordan_structure, scu_split
from .witness import verify_conjugacy

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _add_common(parser):
    parser.add_argument("--tol-rank", type=float, default=1e-10, metavar="X",
                        help="relative rank/pivot threshold (default 1e-10)")
    parser.add_argument("--tol-cluster", type=float, default=1e-8, metavar="X",
                        help="relative eigenvalue clustering radius (default 1e-8)")
    parser.add_argument("--tol-residual", type=float, default=1e-8, metavar="X",
                        help="absolute residual bound (default 1e-8)")
    parser.add_argument("--qmax", type=int, default=64, metavar="N",
                        help="denominator bound for rational dependence (default 64)")
    parser.add_argument("--format", choices=("text", "json"), default="text")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="linflow",
        description="classify linear flows x' = Ax up to topological and "
        "smooth equivalence",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="invariants of one generator")
    p.add_argument("matrix", help="path to a matrix file or an inline literal")
    p.add_argument("--field", choices=("real", "complex"), default=None)
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="equivalence verdict for two generators")
    p.add_argument("matrix_a", nargs="?", help="first matrix (path or literal)")
    p.add_argument("matrix_b", nargs="?", help="second matrix (path or literal)")
    p.add_argument("--relation", choices=("topological", "smooth"),
                   default="topological")
    p.add_argument("--field", choices=("real", "complex"), default=None)
    p.add_argument("--realify", action="store_true",
                   help="realify complex inputs so mixed fields can be compared")
    p.add_argument("--certificate-out", metavar="PATH", default=None)
    p.add_argument("--batch", metavar="FILE", default=None,
                   help="file with one comparison (two sources) per line")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("enum2", help="2x2 catalog and pairwise verdicts")
    p.add_argument("--relation", choices=("topological", "smooth"),
                   default="topological")
    _add_common(p)
    p.set_defaults(func=cmd_enum2)

    p = sub.add_parser("selftest", help="special-matrix identity grids")
    _add_common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def _tolerance(args):
    return Tolerance(
        rank_rel=args.tol_rank,
        eig_cluster_rel=args.tol_cluster,
        residual_abs=args.tol_residual,
    )


def _report_skeleton(args, command, inputs):
    return {
        "schema_version": 1,
        "package_version": __version__,
        "command": command,
        "argv": list(sys.argv[1:]),
        "inputs": inputs,
        "tolerances": {
            "rank_rel": args.tol_rank,
            "eig_cluster_rel": args.tol_cluster,
            "residual_abs": args.tol_residual,
            "qmax": args.qmax,
        },
        "results": {},
    }


def _input_entry(source, a, fld, canonical):
    entry = {"source": source, "sha256": digest(canonical)}
    entry.update(matrix_to_document(a))
    return entry


def _structure_json(st):
    return [
        {"eigenvalue": [lam.real, lam.imag], "sizes": list(sizes)}
        for lam, sizes in st.blocks
    ]


def _descriptor_json(d):
    out = {
        "relation": d.relation,
        "field": d.field,
        "dim_s": d.dim_s,
        "dim_u": d.dim_u,
        "central_structure": [
            {"eigenvalue": list(ev), "sizes": list(sizes)}
            for ev, sizes in d.central_structure
        ],
    }
    if d.full_structure is not None:
        out["full_structure"] = [
            {"eigenvalue": list(ev), "sizes": list(sizes)}
            for ev, sizes in d.full_structure
        ]
    return out


def cmd_classify(args):
    a, fld, canonical = load_matrix(args.matrix, args.field)
    tol = _tolerance(args)
    report = _report_skeleton(args, "classify", [_input_entry(args.matrix, a, fld, canonical)])
    st = jordan_structure(a, tol)
    split = scu_split(a, tol)
    profile = core_profile(a, tol)
    d_top = descriptor(a, "topological", tol)
    d_smooth = descriptor(a, "smooth", tol)
    bounded = bounded_subspace(a, tol)
    if bounded.dim:
        work = realify(a) if np.iscomplexobj(a) else a
        basis = bounded_subspace(work, tol).basis
        restricted = basis.T @ work @ basis
        part = rational_partition(restricted, tol, args.qmax)
        rational = {
            "dim": int(bounded.dim),
            "fixed_dim": part.fixed_dim,
            "classes": [
                {
                    "members": list(c.members),
                    "generator": c.generator,
                    "ratios": [list(r) for r in c.ratios],
                    "ratio_residuals": list(c.ratio_residuals),
                    "period": c.period,
                    "member_dims": list(c.member_dims),
                }
                for c in part.classes
            ],
        }
    else:
        rational = {"dim": 0, "fixed_dim": 0, "classes": []}
    freqs = profile.frequencies
    report["results"] = {
        "dims": {"stable": split.dim_s, "central": split.dim_c, "unstable": split.dim_u},
        "jordan_structure": _structure_json(st),
        "descriptors": {
            "topological": _descriptor_json(d_top),
            "smooth": _descriptor_json(d_smooth),
        },
        "core_profile": [
            {
                "frequency": s,
                "c": [profile.c(n, s) for n in range(profile.ambient_dim + 1)],
                "d": [profile.d(n, s) for n in range(1, profile.ambient_dim + 1)],
            }
            for s in freqs
        ],
        "bounded": rational,
    }
    _emit(args, report, _print_classify)
    return EXIT_OK


def _print_classify(res):
    dims = res["dims"]
    lines = [
        f"dimensions: stable={dims['stable']} central={dims['central']} "
        f"unstable={dims['unstable']}",
        "jordan structure:",
    ]
    for blk in res["jordan_structure"]:
        ev = blk["eigenvalue"]
        lines.append(f"  eigenvalue {ev[0]:+.9g}{ev[1]:+.9g}i  sizes {blk['sizes']}")
    for prof in res["core_profile"]:
        lines.append(
            f"core profile at frequency {prof['frequency']:.9g}: "
            f"c={prof['c']} d={prof['d']}"
        )
    b = res["bounded"]
    lines.append(f"bounded part: dim={b['dim']} fixed={b['fixed_dim']}")
    for cls in b["classes"]:
        lines.append(
            f"  rational class members={cls['members']} ratios={cls['ratios']} "
            f"period={cls['period']:.12g}"
        )
    dt = res["descriptors"]["topological"]
    lines.append(
        f"topological class: dims ({dt['dim_s']}, {dt['dim_u']}), "
        f"central {dt['central_structure']}"
    )
    ds = res["descriptors"]["smooth"]
    lines.append(f"smooth class: structure {ds['full_structure']}")
    return "\n".join(lines)


def _compare_pair(source_a, source_b, args, tol):
    a, fld_a, canon_a = load_matrix(source_a, args.field)
    b, fld_b, canon_b = load_matrix(source_b, args.field)
    if fld_a != fld_b:
        if args.realify:
            a, b = realify(a), realify(b)
            fld_a = fld_b = "real"
        else:
            raise FieldError(
                f"fields differ ({fld_a} vs {fld_b}); pass --realify to compare "
                "their realifications"
            )
    verdict_fn = smooth_verdict if args.relation == "smooth" else topological_verdict
    verdict = verdict_fn(a, b, tol)
    result = {
        "relation": verdict.relation,
        "field": verdict.field,
        "equivalent": verdict.equivalent,
        "alpha": verdict.alpha,
        "reason": verdict.reason,
    }
    if "dims_a" in verdict.details:
        result["dims_a"] = list(verdict.details["dims_a"])
        result["dims_b"] = list(verdict.details["dims_b"])
    if verdict.equivalent and verdict.certificate is not None:
        if args.relation == "smooth":
            check = verify_conjugacy(a, b, verdict.certificate, verdict.alpha, tol)
        else:
            check = verify_conjugacy(
                verdict.details["central_a"],
                verdict.details["central_b"],
                verdict.certificate,
                verdict.alpha,
                tol,
            )
        result["verification"] = {
            "max_residual": check.max_residual,
            "bound": check.bound,
            "passed": check.passed,
        }
        result["certificate"] = matrix_to_document(verdict.certificate)
    inputs = [
        _input_entry(source_a, a, fld_a, canon_a),
        _input_entry(source_b, b, fld_b, canon_b),
    ]
    return verdict, result, inputs


def cmd_compare(args):
    tol = _tolerance(args)
    if args.batch:
        pairs = []
        with open(args.batch, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise InputFormatError(
                        f"batch line needs exactly two sources: {line!r}"
                    )
                pairs.append(parts)
    else:
        if not (args.matrix_a and args.matrix_b):
            raise InputFormatError("compare needs two matrices (or --batch FILE)")
        pairs = [(args.matrix_a, args.matrix_b)]
    all_equivalent = True
    results = []
    inputs = []
    certificate = None
    for source_a, source_b in pairs:
        verdict, result, pair_inputs = _compare_pair(source_a, source_b, args, tol)
        results.append(result)
        inputs.extend(pair_inputs)
        all_equivalent = all_equivalent and verdict.equivalent
        if certificate is None and verdict.certificate is not None:
            certificate = verdict.certificate
    report = _report_skeleton(args, "compare", inputs)
    report["results"] = {"comparisons": results} if args.batch else results[0]
    if args.certificate_out and certificate is not None:
        with open(args.certificate_out, "w", encoding="utf-8") as fh:
            json.dump(matrix_to_document(certificate), fh, sort_keys=True)
            fh.write("\n")
    _emit(args, report, _print_compare)
    return EXIT_OK if all_equivalent else EXIT_NOT_EQUIVALENT


def _print_compare(res):
    items = res["comparisons"] if "comparisons" in res else [res]
    lines = []
    for r in items:
        word = "equivalent" if r["equivalent"] else "not equivalent"
        alpha = f" alpha={r['alpha']:.12g}" if r.get("alpha") else ""
        lines.append(f"{r['relation']}: {word}{alpha}")
        lines.append(f"  reason: {r['reason']}")
        if "dims_a" in r:
            lines.append(f"  dims: {tuple(r['dims_a'])} vs {tuple(r['dims_b'])}")
        if "verification" in r:
            v = r["verification"]
            lines.append(
                f"  certificate residual {v['max_residual']:.3e} "
                f"(bound {v['bound']:.1e}, {'pass' if v['passed'] else 'FAIL'})"
            )
    return "\n".join(lines)


def cmd_enum2(args):
    tol = _tolerance(args)
    entries = catalog_2x2(args.relation)
    concrete = [e for e in entries if e.matrix is not None]
    sampled = list(concrete)
    sample_values = (0.5, 1.0, 2.0)
    if args.relation == "smooth":
        for e in entries:
            if e.family is not None:
                for val in sample_values:
                    sampled.append(
                        type(e)(name=f"{e.name}[a={val}]", matrix=e.sample(val))
                    )
    verdict_fn = smooth_verdict if args.relation == "smooth" else topological_verdict
    n = len(sampled)
    matrix = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if j < i:
                matrix[i][j] = matrix[j][i]
            else:
                matrix[i][j] = bool(
                    verdict_fn(sampled[i].matrix, sampled[j].matrix, tol).equivalent
                )
    labels = _partition_labels(matrix)
    results = {
        "relation": args.relation,
        "entries": [
            {
                "name": e.name,
                "matrix": matrix_to_document(e.matrix)["rows"] if e.matrix is not None else None,
                "template": e.template,
                "constraint": e.constraint,
                "class_label": e.class_label,
            }
            for e in entries
        ],
        "tested": [e.name for e in sampled],
        "pairwise_equivalent": matrix,
        "computed_labels": labels,
        "class_count": len(set(labels)),
    }
    if args.relation == "topological":
        expected = [e.class_label for e in concrete]
        if _relabel(labels) != _relabel(expected) or len(set(labels)) != 8:
            raise InternalConsistencyError(
                f"live 2x2 partition disagrees with the catalog labels: "
                f"{labels} vs {expected}"
            )
        results["catalog_check"] = "8 classes confirmed"
    report = _report_skeleton(args, "enum2", [])
    report["results"] = results
    _emit(args, report, _print_enum2)
    return EXIT_OK


def _partition_labels(matrix):
    labels = [-1] * len(matrix)
    next_label = 0
    for i in range(len(matrix)):
        if labels[i] >= 0:
            continue
        labels[i] = next_label
        for j in range(i + 1, len(matrix)):
            if matrix[i][j]:
                labels[j] = next_label
        next_label += 1
    return labels


def _relabel(labels):
    seen = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return out


def _print_enum2(res):
    lines = [f"catalog ({res['relation']}):"]
    for e in res["entries"]:
        if e["matrix"] is not None:
            label = f" class {e['class_label']}" if e["class_label"] is not None else ""
            lines.append(f"  {e['name']}: {e['matrix']}{label}")
        else:
            lines.append(f"  {e['name']}: {e['template']}  ({e['constraint']})")
    lines.append(f"tested members: {', '.join(res['tested'])}")
    lines.append(f"computed classes: {res['class_count']}")
    lines.append(f"labels: {res['computed_labels']}")
    if "catalog_check" in res:
        lines.append(res["catalog_check"])
    return "\n".join(lines)


def cmd_selftest(args):
    from math import gamma as _gamma

    dev_det = 0.0
    for m in range(1, 7):
        for omega in (0.5, 1.0, 2.25, 7.0, -0.5):
            det = float(np.linalg.det(delta_matrix(m, m, omega)))
            expected = 1.0
            for j in range(1, m + 1):
                expected *= _gamma(j) / _gamma(omega + j)
            dev_det = max(dev_det, abs(det - expected) / abs(expected))
    zero_dev = max(
        abs(float(np.linalg.det(delta_matrix(m, m, float(w)))))
        for m in range(1, 7)
        for w in (-1, -2, -3)
    )
    dev_exp = 0.0
    for m in range(1, 8):
        for t in (-10.0, -1.0, -0.5, 0.5, 1.0, 10.0):
            ref = matexp(np.eye(m, k=1), t)
            for j in range(1, m + 1):
                dev_exp = max(
                    dev_exp, float(np.max(np.abs(exp_block_partition(m, j, t) - ref)))
                )
    # entries off the corner decay like 1/omega, so dev * omega stays ~1
    dev_limit = 0.0
    for omega in (1e3, 1e6):
        for m in range(1, 7):
            d = diag_powers(m, omega) * omega ** (1 - m)
            target = np.zeros((m, m))
            target[m - 1, m - 1] = 1.0
            dev_limit = max(
                dev_limit, float(np.max(np.abs(d - target))) * omega / 1.001
            )
    gamma_dev = max(
        abs(recip_gamma(float(k)) - 1.0 / _gamma(k)) * _gamma(k) for k in range(1, 20)
    )
    results = {
        "delta_determinant": {
            "max_rel_dev": dev_det,
            "zero_at_negative_integers": zero_dev,
            "passed": bool(dev_det <= 1e-8 and zero_dev <= 1e-12),
        },
        "exp_partition": {"max_abs_dev": dev_exp, "passed": bool(dev_exp <= 1e-9)},
        "power_diagonal_limit": {"max_scaled_dev": dev_limit,
                                 "passed": bool(dev_limit <= 1.0)},
        "recip_gamma": {"max_rel_dev": gamma_dev, "passed": bool(gamma_dev <= 1e-10)},
    }
    report = _report_skeleton(args, "selftest", [])
    report["results"] = results
    _emit(args, report, _print_selftest)
    if not all(v["passed"] for v in results.values()):
        raise InternalConsistencyError("selftest identity grid failed")
    return EXIT_OK


def _print_selftest(res):
    lines = []
    for name, r in res.items():
        status = "pass" if r["passed"] else "FAIL"
        detail = " ".join(
            f"{k}={v:.3e}" for k, v in r.items() if isinstance(v, float)
        )
        lines.append(f"{name}: {status} ({detail})")
    return "\n".join(lines)


def _emit(args, report, printer):
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        print(printer(report["results"]))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputFormatError, NonFiniteError, ShapeError, FieldError,
            NotBoundedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except LinflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
