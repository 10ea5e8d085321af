"""Command-line front end: compute objects, verify identities, drive the
regression suite.

Output is machine-readable (``--format json``, the default) or plain text;
either way it is deterministic — exact arithmetic, canonical term orders, no
timestamps outside ``bench``.  Exit codes: 0 success, 1 a verified identity
failed to hold (a structured diff is printed), 2 usage error.  The
verification driver runs independent jobs on a thread pool sized by the
``MACFOCK_THREADS`` environment variable (default: available parallelism);
results are byte-identical regardless of the schedule.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import MacfockError, SingularSystem
from .fock import FockVector, free_field_operator, g_finite_reduction_check, \
    pairing, schur_limit_checks
from .macdonald import (BASIS, check_partial_fraction_identity,
                        eigencheck_difference, macdonald_P, macdonald_norm)
from .partitions import (Partition, PartitionTuple, enumerate_partitions,
                         partitions_up_to, tuples_up_to)
from .process import (KernelSpec, Observable, ProcessSpec,
                      correlation_direct, correlation_operator,
                      expectation_generating_series, fredholm_det,
                      q_whittaker_limit_check)
from .scalars import ONE, Q, T, RatFunc, qt
from .symfunc import SymFunc, from_s, inner_product, to_m
from .dim import (dim_x0_apply, expectation_identity_check,
                  generalized_cauchy_sum, generalized_eigenvalue,
                  generalized_macdonald_P, generalized_macdonald_Q,
                  generalized_measure_weight, phi_gamma_exchange_coeffs,
                  TensorFockVector)

_OBS_FAMILY = {
    "hatE1": ("hatE1", False),
    "unit": ("unit", False),
    "E": ("E_obs", True),
    "Eprime": ("E_prime_obs", True),
    "G": ("G_obs", True),
    "Gprime": ("G_prime_obs", True),
}


def _parse_observable(text, error):
    """'hatE1' or 'E:2' -> Observable."""
    name, _, rank = text.partition(":")
    try:
        family, ranked = _OBS_FAMILY[name]
    except KeyError:
        error(f"unknown observable {name!r}; "
              f"choose from {', '.join(sorted(_OBS_FAMILY))}")
    if ranked:
        if not rank:
            error(f"observable {name} needs a rank, e.g. {name}:1")
        return Observable(family, int(rank))
    if rank:
        error(f"observable {name} takes no rank")
    return Observable(family)


def _parse_counts(text, levels, flag, error):
    """'1' or '1,2' -> per-level alphabet sizes."""
    parts = [p for p in text.split(",") if p != ""]
    try:
        counts = [int(p) for p in parts]
    except ValueError:
        error(f"{flag} wants integers, got {text!r}")
    if len(counts) == 1:
        counts = counts * levels
    if len(counts) != levels:
        error(f"{flag} lists {len(counts)} alphabets for {levels} levels")
    return counts


def _coeff_rows(pairs, key_name, key_fn):
    rows = []
    for key, value in pairs:
        rows.append({key_name: key_fn(key), "value": value.render()})
    return rows


def _emit(payload, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for line in _text_lines(payload):
            sys.stdout.write(line + "\n")


def _text_lines(obj, indent=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                yield f"{indent}{k}:"
                yield from _text_lines(v, indent + "  ")
            else:
                yield f"{indent}{k}: {v}"
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                yield from _text_lines(v, indent)
                yield f"{indent}-"
            else:
                yield f"{indent}{v}"
    else:
        yield f"{indent}{obj}"


# ---------------------------------------------------------------------------
# compute / expect / fredholm / dim
# ---------------------------------------------------------------------------

def cmd_compute(args, error):
    lam = Partition.from_text(args.lam)
    if args.family == "norm":
        payload = {"family": "norm", "lambda": list(lam),
                   "value": macdonald_norm(lam).render()}
        _emit(payload, args.format)
        return 0
    f = BASIS.P(lam) if args.family == "P" else BASIS.Q(lam)
    if args.basis == "m":
        pairs = sorted(to_m(f).items())
    else:
        pairs = sorted(f.terms.items())
    payload = {
        "family": args.family,
        "lambda": list(lam),
        "basis": args.basis,
        "coefficients": _coeff_rows(pairs, "partition", list),
    }
    _emit(payload, args.format)
    return 0


def cmd_expect(args, error):
    observables = [_parse_observable(t, error)
                   for t in args.obs.split(",") if t]
    if not observables:
        error("--obs lists no observables")
    levels = len(observables)
    spec = ProcessSpec(_parse_counts(args.xvars, levels, "--xvars", error),
                       _parse_counts(args.yvars, levels, "--yvars", error),
                       args.degree)
    payload = {"observables": args.obs.split(","), "degree": args.degree,
               "levels": levels}
    code = 0
    if args.method in ("direct", "both"):
        payload["direct"] = correlation_direct(observables, spec).render()
    if args.method in ("operator", "both"):
        payload["operator"] = correlation_operator(observables, spec).render()
    if args.method == "both":
        payload["equal"] = payload["direct"] == payload["operator"]
        if not payload["equal"]:
            code = 1
    _emit(payload, args.format)
    return code


_KERNEL_FAMILY = {"KE": "E_obs", "KEprime": "E_prime_obs",
                  "KG": "G_obs", "KGprime": "G_prime_obs"}


def cmd_fredholm(args, error):
    spec = ProcessSpec([args.xvars], [args.yvars], args.degree)
    det = fredholm_det(KernelSpec(args.kernel), args.uorder, spec)
    direct = expectation_generating_series(
        _KERNEL_FAMILY[args.kernel], args.uorder, spec)
    uidx = len(det.ring.vars) - 1
    rows = []
    equal = True
    for r in range(args.uorder + 1):
        dcoeff = {e[:uidx]: c for e, c in det.terms.items() if e[uidx] == r}
        xcoeff = {e[:uidx]: c for e, c in direct.terms.items()
                  if e[uidx] == r}
        same = dcoeff == xcoeff
        equal = equal and same
        rows.append({
            "power": r,
            "determinant": _render_exps(dcoeff, det.ring.vars[:uidx]),
            "direct": _render_exps(xcoeff, det.ring.vars[:uidx]),
            "equal": same,
        })
    payload = {"kernel": args.kernel, "uorder": args.uorder,
               "degree": args.degree, "coefficients": rows, "equal": equal}
    _emit(payload, args.format)
    return 0 if equal else 1


def _render_exps(terms, names):
    if not terms:
        return "0"
    bits = []
    for exps in sorted(terms, key=lambda e: (sum(e), e)):
        mono = "*".join(f"{v}^{e}" if e > 1 else v
                        for v, e in zip(names, exps) if e)
        c = terms[exps].render()
        bits.append(f"({c})*{mono}" if mono else c)
    return " + ".join(bits)


def cmd_dim(args, error):
    fmt = args.format
    if args.what in ("P", "Q", "eigenvalue"):
        tup = PartitionTuple.from_text(args.tuple)
        if args.what == "eigenvalue":
            _emit({"tuple": [list(l) for l in tup],
                   "value": generalized_eigenvalue(tup).render()}, fmt)
            return 0
        fn = generalized_macdonald_P if args.what == "P" \
            else generalized_macdonald_Q
        try:
            vec = fn(tup)
        except SingularSystem as exc:
            _emit({"tuple": [list(l) for l in tup], "family": args.what,
                   "singular": True, "detail": str(exc)}, fmt)
            return 0
        pairs = sorted(vec.terms.items(),
                       key=lambda kv: (kv[0].weight(), kv[0]))
        _emit({"tuple": [list(l) for l in tup], "family": args.what,
               "basis": "p",
               "coefficients": _coeff_rows(
                   pairs, "tuple", lambda t: [list(l) for l in t])}, fmt)
        return 0

    levels = args.levels
    if args.what == "measure":
        tup = PartitionTuple.from_text(args.tuple)
        levels = len(tup)
    spec = ProcessSpec(_parse_counts(args.xvars, levels, "--xvars", error),
                       _parse_counts(args.yvars, levels, "--yvars", error),
                       args.degree)
    if args.what == "measure":
        try:
            w = generalized_measure_weight(tup, spec)
        except SingularSystem as exc:
            _emit({"tuple": [list(l) for l in tup], "singular": True,
                   "detail": str(exc)}, fmt)
            return 0
        _emit({"tuple": [list(l) for l in tup], "degree": args.degree,
               "value": w.render()}, fmt)
        return 0
    if args.what == "cauchy":
        total = generalized_cauchy_sum(spec)
        ok = total == spec.ring.one()
        _emit({"levels": levels, "degree": args.degree,
               "sum": total.render(), "one": ok}, fmt)
        return 0 if ok else 1
    # moment: both sides of the first-moment identity
    report = expectation_identity_check(levels, spec)
    payload = {
        "levels": levels, "degree": args.degree,
        "measure_side": report.lhs.render(),
        "readings": {
            name: {"value": report.values[name].render(),
                   "matches": report.matches[name]}
            for name in report.values
        },
        "matching": list(report.matching_readings),
        "equal": report.equal,
    }
    _emit(payload, fmt)
    return 0 if report.equal else 1


# ---------------------------------------------------------------------------
# verification jobs
# ---------------------------------------------------------------------------

def _job_basis(quick):
    wmax = 4 if quick else 6
    count = 0
    for d in range(wmax + 1):
        parts, ps, _ = BASIS.degree_data(d)
        count += len(parts)
        for i, lam in enumerate(parts):
            for mu in parts[:i]:
                if not inner_product(ps[lam], ps[mu]).is_zero():
                    return {"ok": False, "max_weight": wmax,
                            "diff": f"<P_{lam.render()}, P_{mu.render()}>"
                                    " is nonzero"}
    pinned = to_m(macdonald_P(Partition((2,)))).get(Partition((1, 1)))
    want = (ONE + Q) * (ONE - T) / (ONE - Q * T)
    if pinned != want:
        return {"ok": False, "max_weight": wmax,
                "diff": {"lhs": pinned.render(), "rhs": want.render()}}
    return {"ok": True, "max_weight": wmax, "polynomials": count}


def _job_difference_oracles(quick):
    wmax = 3 if quick else 4
    nmax = 3 if quick else 4
    plans = [("D", (1, 2), nmax), ("E", (1, 2), nmax),
             ("H", (1,), min(3, nmax)), ("G", (1,), min(3, nmax))]
    checks = 0
    for family, ranks, ncap in plans:
        for n in range(1, ncap + 1):
            for lam in partitions_up_to(wmax):
                if lam.length() > n:
                    continue
                for r in ranks:
                    if family == "D" and r > n:
                        continue
                    report = eigencheck_difference(lam, n, family, r)
                    checks += 1
                    if not report:
                        return {"ok": False, "family": family, "n": n,
                                "r": r, "lambda": list(lam),
                                "diff": repr(report)}
    return {"ok": True, "max_weight": wmax, "checks": checks}


def _job_operator_forms(quick):
    deg = 3 if quick else 4
    rmax = 2 if quick else 3
    checks = 0
    for family in ("E", "E_inv", "G", "G_inv"):
        for r in range(1, rmax + 1):
            for lam in partitions_up_to(deg):
                v = FockVector.from_p(lam)
                a = free_field_operator(family, r, "product_kernel", v,
                                        fock_degree=deg)
                b = free_field_operator(family, r, "determinant_kernel", v,
                                        fock_degree=deg)
                checks += 1
                if a != b:
                    return {"ok": False, "family": family, "r": r,
                            "lambda": list(lam),
                            "diff": {"product": a.sym.render(),
                                     "determinant": b.sym.render()}}
    return {"ok": True, "degree": deg, "max_r": rmax, "checks": checks}


def _job_diagonalization(quick):
    from .symfunc import eigenvalue_e_g
    wmax = 3 if quick else 4
    evs = {
        "E": lambda r, lam: eigenvalue_e_g("e_r", r, lam),
        "E_inv": lambda r, lam: eigenvalue_e_g("e_r", r, lam, inverted=True),
        "G": lambda r, lam: eigenvalue_e_g("g_r", r, lam),
        "G_inv": lambda r, lam: eigenvalue_e_g("g_r", r, lam, inverted=True),
    }
    checks = 0
    for lam in partitions_up_to(wmax):
        v = FockVector(macdonald_P(lam))
        for family, ev in evs.items():
            for r in (1, 2):
                img = free_field_operator(family, r, "product_kernel", v,
                                          fock_degree=lam.weight())
                checks += 1
                if img != v.scale(ev(r, lam)):
                    return {"ok": False, "family": family, "r": r,
                            "lambda": list(lam), "diff": img.sym.render()}
    return {"ok": True, "max_weight": wmax, "checks": checks}


def _job_cauchy(quick, degree=None, xvars=2, yvars=2):
    from .fock import GAMMA_MINUS, GAMMA_PLUS, cauchy_product, gamma_apply
    from .scalars import PolyRing
    deg = degree if degree is not None else (4 if quick else 5)
    names = tuple(f"x{i}" for i in range(1, xvars + 1)) \
        + tuple(f"y{j}" for j in range(1, yvars + 1))
    ring_ = PolyRing(names, degree=deg)
    xs, ys = names[:xvars], names[xvars:]
    state = gamma_apply(-1, ring_, xs, FockVector.vacuum())
    state = gamma_apply(+1, ring_, ys, state)
    lhs = state.vacuum_component()
    rhs = cauchy_product(ring_, xs, ys)
    if lhs != rhs:
        return {"ok": False, "degree": deg,
                "diff": {"matrix_element": lhs.render(),
                         "product": rhs.render()}}
    return {"ok": True, "degree": deg, "xvars": xvars, "yvars": yvars}


def _job_correlation(quick):
    menu = [Observable("hatE1"), Observable("E_obs", 1),
            Observable("E_prime_obs", 1), Observable("G_obs", 1),
            Observable("G_prime_obs", 1)]
    if quick:
        pairs = [(a, a) for a in menu] + [(menu[0], menu[1]),
                                          (menu[3], menu[4])]
    else:
        pairs = [(a, b) for a in menu for b in menu]
    spec = ProcessSpec([1, 1], [1, 1], 3)
    for a, b in pairs:
        direct = correlation_direct([a, b], spec)
        operator = correlation_operator([a, b], spec)
        if direct != operator:
            return {"ok": False, "pair": [repr(a), repr(b)],
                    "diff": {"direct": direct.render(),
                             "operator": operator.render()}}
    return {"ok": True, "pairs": len(pairs), "degree": 3}


def _job_fredholm(quick):
    deg = 2 if quick else 3
    spec = ProcessSpec([1], [1], deg)
    for kernel, family in sorted(_KERNEL_FAMILY.items()):
        det = fredholm_det(KernelSpec(kernel), 2, spec)
        direct = expectation_generating_series(family, 2, spec)
        if det != direct:
            return {"ok": False, "kernel": kernel,
                    "diff": {"determinant": det.render(),
                             "direct": direct.render()}}
    limit = q_whittaker_limit_check(2, spec)
    if not limit:
        return {"ok": False, "kernel": "KGprime_t0",
                "diff": f"u-powers {limit.failures}"}
    return {"ok": True, "degree": deg, "uorder": 2, "kernels": 5}


def _job_q_independence(quick):
    deg = 2 if quick else 3
    spec = ProcessSpec([1], [1], deg)
    det = fredholm_det(KernelSpec("KE"), 2, spec)
    uidx = len(det.ring.vars) - 1
    offenders = []
    for exps, c in det.sorted_terms():
        if exps[uidx] in (1, 2) and "q" in c.render():
            offenders.append(_render_exps({exps: c}, det.ring.vars))
    if offenders:
        return {"ok": False, "diff": offenders}
    return {"ok": True, "degree": deg, "uorder": 2}


def _job_schur_limit(quick):
    wmax = 4 if quick else 5
    rmax = 2 if quick else 3
    opdeg = 2 if quick else 3
    checks = 0
    for lam in partitions_up_to(wmax):
        for r in range(1, rmax + 1):
            opd = lam.weight() if lam.weight() == opdeg else None
            report = schur_limit_checks(lam, r, operator_degree=opd)
            checks += 1
            if not report:
                return {"ok": False, "lambda": list(lam), "r": r,
                        "diff": report.failures}
    return {"ok": True, "max_weight": wmax, "max_r": rmax, "checks": checks}


def _job_finite_reduction(quick):
    deg = 3 if quick else 4
    shifts = [(0, 0)] if quick else [(0, 0), (1, 0)]
    for n in (1, 2):
        for r in (1, 2):
            for mu in shifts:
                bad = g_finite_reduction_check(r, n, mu[:n], deg)
                if bad:
                    return {"ok": False, "n": n, "r": r, "mu": list(mu[:n]),
                            "diff": [list(l) for l in bad]}
    nmax = 2 if quick else 3
    for n in range(1, nmax + 1):
        for nu in partitions_up_to(3):
            if nu.length() == n and not check_partial_fraction_identity(nu):
                return {"ok": False, "nu": list(nu),
                        "diff": "partial-fraction identity failed"}
    return {"ok": True, "degree": deg, "shifts": len(shifts)}


def _job_tensor_measure(quick):
    singular, solved = [], []
    for tup in tuples_up_to(2, 2):
        try:
            generalized_macdonald_P(tup)
            solved.append(tup.render())
        except SingularSystem:
            singular.append(tup.render())
    want_singular = ["1,1|0", "1|0", "2|0"]
    if sorted(singular) != want_singular:
        return {"ok": False,
                "diff": {"singular": sorted(singular),
                         "expected": want_singular}}
    spec = ProcessSpec([1, 1], [1, 1], 2)
    total = generalized_cauchy_sum(spec)
    if total != spec.ring.one():
        return {"ok": False, "diff": {"cauchy_sum": total.render()}}
    spec1 = ProcessSpec([1], [1], 3)
    rep1 = expectation_identity_check(1, spec1)
    rep2 = expectation_identity_check(2, spec)
    if not (rep1.equal and rep2.equal):
        return {"ok": False,
                "diff": {"m1": rep1.matches, "m2": rep2.matches}}
    return {"ok": True, "solved": sorted(solved),
            "singular": sorted(singular),
            "matching_readings": list(rep2.matching_readings)}


_JOBS = (
    ("basis", _job_basis),
    ("difference-oracles", _job_difference_oracles),
    ("operator-forms", _job_operator_forms),
    ("diagonalization", _job_diagonalization),
    ("cauchy", _job_cauchy),
    ("correlation", _job_correlation),
    ("fredholm", _job_fredholm),
    ("q-independence", _job_q_independence),
    ("schur-limit", _job_schur_limit),
    ("finite-reduction", _job_finite_reduction),
    ("tensor-measure", _job_tensor_measure),
)


def _thread_count():
    env = os.environ.get("MACFOCK_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_verify(args, error):
    fmt = args.format
    table = dict(_JOBS)
    if args.job == "cauchy" and (args.degree is not None
                                 or args.xvars or args.yvars):
        result = _job_cauchy(args.quick, degree=args.degree,
                             xvars=int(args.xvars or 2),
                             yvars=int(args.yvars or 2))
        payload = {"job": "cauchy", **result}
        _emit(payload, fmt)
        return 0 if result["ok"] else 1
    if args.degree is not None or args.xvars or args.yvars:
        error("--degree/--xvars/--yvars only apply to `verify cauchy`")
    if args.job != "all":
        result = table[args.job](args.quick)
        _emit({"job": args.job, **result}, fmt)
        return 0 if result["ok"] else 1
    jobs = list(_JOBS)
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        futures = {name: pool.submit(fn, args.quick) for name, fn in jobs}
        results = [{"job": name, **futures[name].result()}
                   for name, _ in jobs]
    ok = all(r["ok"] for r in results)
    _emit({"suite": results, "ok": ok, "jobs": len(results),
           "quick": bool(args.quick)}, fmt)
    return 0 if ok else 1


def cmd_bench(args, error):
    rows = []

    def clock(label, fn):
        t0 = time.perf_counter()
        fn()
        rows.append((label, time.perf_counter() - t0))

    clock("macdonald basis through weight 6",
          lambda: BASIS.degree_data(6))
    clock("difference-operator eigencheck D r=2 n=3 |lam|=3",
          lambda: eigencheck_difference(Partition((2, 1)), 3, "D", 2))
    clock("free-field determinant form G r=2 on degree 4",
          lambda: free_field_operator(
              "G", 2, "determinant_kernel",
              FockVector.from_p(Partition((2, 2))), fock_degree=4))
    clock("two-level correlation (hatE1, hatE1) degree 3",
          lambda: correlation_direct(
              [Observable("hatE1"), Observable("hatE1")],
              ProcessSpec([1, 1], [1, 1], 3)))
    clock("fredholm determinant KE u^2 degree 3",
          lambda: fredholm_det(KernelSpec("KE"), 2,
                               ProcessSpec([1], [1], 3)))
    clock("tensor block weight 2 at two legs",
          lambda: generalized_macdonald_P(
              PartitionTuple.from_text("1|1")))
    if args.format == "json":
        _emit({"benchmarks": [{"label": l, "seconds": round(s, 3)}
                              for l, s in rows]}, "json")
    else:
        for label, seconds in rows:
            sys.stdout.write(f"{seconds:8.3f}s  {label}\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"),
                        default="json", help="output style")

    parser = argparse.ArgumentParser(
        prog="macfock",
        description="exact Macdonald-process computations and checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common],
                       help="one symmetric-function object")
    p.add_argument("family", choices=("P", "Q", "norm"))
    p.add_argument("--lambda", dest="lam", required=True,
                   help="partition, e.g. 2,1")
    p.add_argument("--basis", choices=("m", "p"), default="m")
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("verify", parents=[common],
                       help="identity checks; `all` runs the whole suite")
    p.add_argument("job", choices=("all",) + tuple(n for n, _ in _JOBS))
    p.add_argument("--quick", action="store_true",
                   help="smaller cutoffs, same identities")
    p.add_argument("--degree", type=int, default=None,
                   help="cauchy job: truncation degree")
    p.add_argument("--xvars", default=None,
                   help="cauchy job: X alphabet size")
    p.add_argument("--yvars", default=None,
                   help="cauchy job: Y alphabet size")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("expect", parents=[common],
                       help="correlation expectations, two routes")
    p.add_argument("--obs", required=True,
                   help="comma list, e.g. hatE1 or E:1,G:2 (one per level)")
    p.add_argument("--method", choices=("direct", "operator", "both"),
                   default="both")
    p.add_argument("--xvars", default="1")
    p.add_argument("--yvars", default="1")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=cmd_expect)

    p = sub.add_parser("fredholm", parents=[common],
                       help="Fredholm determinant vs direct expectation")
    p.add_argument("--kernel", choices=tuple(sorted(_KERNEL_FAMILY)),
                   default="KE")
    p.add_argument("--uorder", type=int, default=2)
    p.add_argument("--xvars", type=int, default=1)
    p.add_argument("--yvars", type=int, default=1)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=cmd_fredholm)

    p = sub.add_parser("dim", parents=[common],
                       help="tensor-level objects and identities")
    p.add_argument("what", choices=("P", "Q", "eigenvalue", "measure",
                                    "cauchy", "moment"))
    p.add_argument("--tuple", default=None,
                   help="partition tuple, e.g. 1|0 for ((1), empty)")
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--xvars", default="1")
    p.add_argument("--yvars", default="1")
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(fn=cmd_dim)

    p = sub.add_parser("bench", parents=[common],
                       help="timings of representative computations")
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dim" and args.what in ("P", "Q", "eigenvalue",
                                               "measure") \
            and not args.tuple:
        parser.error(f"dim {args.what} needs --tuple")
    try:
        return args.fn(args, parser.error)
    except MacfockError as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, args.format)
        return 1


if __name__ == "__main__":
    sys.exit(main())
