"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or validation error.
Verification suites print one ``PASS <case>`` or ``FAIL <case>`` line per
case and finish with a JSON summary line.
"""

from __future__ import annotations

import argparse
import json
import sys

from .degree2 import (
    BinaryForm,
    chi_n_star_data,
    chi_star_consistent,
    f_local_p,
    reduced_forms,
    s_degree_bound,
    verify_f_local_fe,
)
from .fpforms import (
    CharacterKind,
    EnumerationLimitError,
    FormClass,
    form_matrix,
    gl_order,
    legendre,
    orth_order_bruteforce,
    orth_order_closed,
    rank_counts,
    w_count_bruteforce,
    w_count_closed,
)
from .functeq import fe_involution_ok, fe_matrix, t_matrix
from .scalars import check_prime
from .upoperator import (
    EisensteinContext,
    ParityError,
    b_inverse,
    b_matrix,
    eigen_data,
    lambda_matrix,
    minimal_weight,
    up_matrix,
)

SUITES = ("w-counts", "orth-orders", "eigen", "involution", "deg2")


class UsageError(ValueError):
    pass


def _prime_list(text):
    try:
        primes = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--p expects an integer or comma list, got {text!r}") from None
    if not primes:
        raise UsageError("--p is empty")
    for p in primes:
        try:
            check_prime(p)
        except ValueError:
            raise UsageError(f"{p} is not a prime") from None
        if p == 2:
            raise UsageError("p must be an odd prime")
    return primes


def _single_prime(text):
    primes = _prime_list(text)
    if len(primes) != 1:
        raise UsageError("this command takes a single prime")
    return primes[0]


def _context(args):
    if args.n is None or args.k is None:
        raise UsageError("--n and --k are required")
    return EisensteinContext(_single_prime(args.p), args.n, args.k, CharacterKind.parse(args.character))


def _emit(obj, fmt, text_fn, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        out.write(text_fn() + "\n")


def cmd_up_matrix(args, out):
    ctx = _context(args)
    M, prefactor = up_matrix(ctx)
    obj = {"context": ctx.to_json(), "prefactor": prefactor.to_json(), "M": M.to_json()}
    _emit(obj, args.format, lambda: f"U(p) = p^({prefactor}) * M, X = p^(-2s)\nM =\n{M.to_text()}", out)
    return 0


def cmd_eigen_basis(args, out):
    ctx = _context(args)
    M, prefactor = up_matrix(ctx)
    B, B_inv = b_matrix(ctx), b_inverse(ctx)
    data = eigen_data(ctx)
    obj = {
        "context": ctx.to_json(),
        "prefactor": prefactor.to_json(),
        "M": M.to_json(),
        "B": B.to_json(),
        "B_inv": B_inv.to_json(),
        "eigen_exponents": [e.to_json() for e in data.exponents],
    }

    def text():
        exps = ", ".join(f"p^({e})" for e in data.exponents)
        return f"X = p^(-2s)\nB =\n{B.to_text()}\nB^-1 =\n{B_inv.to_text()}\neigenvalues: {exps}"

    _emit(obj, args.format, text, out)
    return 0


def cmd_fe_matrix(args, out):
    ctx = _context(args)
    T, FE = t_matrix(ctx), fe_matrix(ctx)
    ok = fe_involution_ok(ctx, FE)
    obj = {"context": ctx.to_json(), "T": T.to_json(), "FE": FE.to_json(), "involution_ok": ok}
    _emit(obj, args.format, lambda: f"X = p^(-2s)\nT =\n{T.to_text()}\nFE =\n{FE.to_text()}\ninvolution_ok: {ok}", out)
    return 0 if ok else 1


def cmd_deg2(args, out):
    from .localseries import local_series_bruteforce

    p = _single_prime(args.p)
    if not args.form:
        raise UsageError("--form a,b,c is required")
    try:
        N = BinaryForm.parse(args.form)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prof = chi_n_star_data(N, p)
    F, S = f_local_p(N, p, prof)
    fe_ok = verify_f_local_fe(N, p)
    depth = s_degree_bound(N, p)
    try:
        oracle = local_series_bruteforce(N, p, 1, max(depth, 1))
        oracle_ok = oracle == S.num and S.den.degree == 0 and S.den[0] == 1
    except EnumerationLimitError:
        oracle_ok = None
    obj = {
        "form": str(N),
        "profile": prof.to_json(),
        "F": F.to_json(),
        "S": S.to_json(),
        "fe_ok": fe_ok,
        "oracle_ok": oracle_ok,
    }
    _emit(obj, args.format, lambda: "\n".join([
        f"N = {N}  det(2N) = {N.det2}  p = {p}",
        *(f"  {k}: {v}" for k, v in prof.to_json().items()),
        f"F_N^(p) = {F}",
        f"S_2^(1) = {S}",
        f"fe_ok: {fe_ok}",
        f"oracle_ok: {oracle_ok}",
    ]), out)
    return 0 if fe_ok and oracle_ok is not False else 1


# -- verification suites -------------------------------------------------

def _suite_w_counts(args):
    max_l = 3 if args.max_l is None else args.max_l
    for p in _prime_list(args.p):
        for l in range(max_l + 1):
            counts = rank_counts(l, p)
            yield f"strat/l={l}/p={p}", sum(counts) == p ** (l * (l + 1) // 2)
            for m in range(l + 1):
                for psi in CharacterKind:
                    closed = w_count_closed(l, m, psi, p)
                    yield f"w/l={l}/m={m}/{psi.value}/p={p}", closed == w_count_bruteforce(l, m, psi, p)
                yield f"w-rank/l={l}/m={m}/p={p}", w_count_closed(l, m, "trivial", p) == counts[m]


def _suite_orth_orders(args):
    max_m = 2 if args.max_m is None else args.max_m
    for p in _prime_list(args.p):
        yield f"gl/l=2/p={p}", gl_order(2, p) == p * (p - 1) * (p * p - 1)
        for m in range(1, max_m + 1):
            for form in FormClass:
                brute = orth_order_bruteforce(form_matrix(m, form, p))
                yield f"orth/m={m}/{form.value}/p={p}", brute == orth_order_closed(m, form, p)


def _contexts(args, default_n):
    max_n = default_n if args.max_n is None else args.max_n
    chars = [CharacterKind.parse(args.character)] if args.character else list(CharacterKind)
    for p in _prime_list(args.p):
        for psi in chars:
            for n in range(1, max_n + 1):
                k = args.k if args.k is not None else minimal_weight(p, psi)
                yield EisensteinContext(p, n, k, psi)


def _suite_eigen(args):
    for ctx in _contexts(args, 5):
        tag = f"n={ctx.n}/{ctx.psi.value}/p={ctx.p}"
        M, _ = up_matrix(ctx)
        B = b_matrix(ctx)
        yield f"eigen/{tag}", (B @ M) == (lambda_matrix(ctx) @ B)
        yield f"b-inverse/{tag}", (B @ b_inverse(ctx)).is_identity()
        eigen_data(ctx)
        if ctx.psi is CharacterKind.QUADRATIC:
            sparse = all(
                M[i, j].is_zero() and B[i, j].is_zero()
                for i in range(ctx.n + 1) for j in range(ctx.n + 1) if (j - i) % 2
            )
            yield f"sparsity/{tag}", sparse


def _suite_involution(args):
    for ctx in _contexts(args, 4):
        tag = f"n={ctx.n}/{ctx.psi.value}/p={ctx.p}"
        T = t_matrix(ctx)
        yield f"t-involution/{tag}", (T.substitute_fe(ctx.n) @ T).is_identity()
        yield f"fe-involution/{tag}", fe_involution_ok(ctx)


def _suite_deg2(args):
    max_det = 200 if args.max_det is None else args.max_det
    for p in _prime_list(args.p):
        for N in reduced_forms(max_det):
            tag = f"N={N}/p={p}"
            yield f"fe/{tag}", verify_f_local_fe(N, p)
            yield f"chi-star/{tag}", chi_star_consistent(N, p)


SUITE_FNS = {
    "w-counts": _suite_w_counts,
    "orth-orders": _suite_orth_orders,
    "eigen": _suite_eigen,
    "involution": _suite_involution,
    "deg2": _suite_deg2,
}


def cmd_verify(args, out):
    if not args.suite:
        raise UsageError("--suite is required")
    failed, total = [], 0
    for case, ok in SUITE_FNS[args.suite](args):
        total += 1
        out.write(f"{'PASS' if ok else 'FAIL'} {case}\n")
        if not ok:
            failed.append(case)
    out.write(json.dumps({"suite": args.suite, "total": total, "failed": failed}) + "\n")
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="eisfe", description="Exact U(p) and functional-equation matrices for Siegel Eisenstein series.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(sp, need_ctx=True):
        sp.add_argument("--p", required=True, help="odd prime (comma list for verify)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if need_ctx:
            sp.add_argument("--n", type=int)
            sp.add_argument("--k", type=int)
            sp.add_argument("--character", choices=("trivial", "quadratic"), default="trivial")

    for verb, fn in (("up-matrix", cmd_up_matrix), ("eigen-basis", cmd_eigen_basis), ("fe-matrix", cmd_fe_matrix)):
        sp = sub.add_parser(verb)
        common(sp)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("deg2")
    common(sp, need_ctx=False)
    sp.add_argument("--form", help="a,b,c for N = [[a, b/2], [b/2, c]]")
    sp.set_defaults(fn=cmd_deg2)

    sp = sub.add_parser("verify")
    sp.add_argument("--p", default="3")
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--character", choices=("trivial", "quadratic"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--max-l", type=int)
    sp.add_argument("--max-m", type=int)
    sp.add_argument("--max-n", type=int)
    sp.add_argument("--max-det", type=int)
    sp.set_defaults(fn=cmd_verify)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.fn(args, out)
    except (UsageError, ParityError, EnumerationLimitError, ValueError) as exc:
        sys.stderr.write(f"eisfe: error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
