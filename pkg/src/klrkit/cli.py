"""Command-line entry point: ``klrkit <command> [--config FILE] [--cutoff D] [--out FILE]``.

Every command reads an optional YAML/JSON config, validates it, runs one
verification pipeline and prints a JSON report with the inputs echoed, the
results and a ``verdict``.  Exit status: 0 on pass, 1 on a failed verdict or
a module error, 2 on a configuration error.
"""

import argparse
import sys
from math import comb

from . import __version__
from .errors import ConfigError, IdentityViolation, KLRKitError
from .io import ResultCache, atomic_write, content_hash, dumps, load_config

# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _int_list(x):
    return isinstance(x, list) and all(_is_int(v) for v in x)


def _cartan(x):
    return isinstance(x, dict) and ("type" in x or "matrix" in x)


def _arrows(x):
    return isinstance(x, list) and all(isinstance(a, list) and len(a) in (2, 3) for a in x)


def _quiver(x):
    return isinstance(x, dict) and "type" in x and _arrows(x.get("arrows", []))


def _positive(x):
    return _is_int(x) and x > 0


def _nonneg(x):
    return _is_int(x) and x >= 0


def _bool(x):
    return isinstance(x, bool)


def _mapping(x):
    return isinstance(x, dict)


def _list(x):
    return isinstance(x, list)


SCHEMAS = {
    "klr-dim": {"cartan": _cartan, "arrows": _arrows, "beta": _int_list, "cutoff": _positive, "brute_force": _bool},
    "cyclotomic": {"cartan": _cartan, "arrows": _arrows, "lambda": _int_list, "beta": _int_list,
                   "cutoff": _positive, "projectives": _bool},
    "shapovalov": {"cartan": _cartan, "lambda": _int_list, "beta": _int_list, "serre": _bool},
    "rmatrix": {"N": _positive, "modules": _int_list, "yang_baxter": _bool, "unitarity": _bool},
    "fusion": {"N": _positive, "a": _is_int, "b": _is_int},
    "quiver-from-denominators": {"window": _mapping, "J": _list, "X": _list, "s": _list,
                                 "denominators": _list, "beta": _list},
    "phi-map": {"quiver": _quiver, "xi": _mapping, "window": _int_list},
    "verify-g0": {"quiver": _quiver, "xi": _mapping, "window": _int_list},
    "verify-sl2": {"cartan": _cartan, "arrows": _arrows, "lambda": _int_list, "max_height": _nonneg,
                   "cutoff": _positive, "resolution": _bool},
}

DEFAULTS = {
    "klr-dim": {"cartan": {"type": "A1"}, "beta": [2], "cutoff": 12, "brute_force": True},
    "cyclotomic": {"cartan": {"type": "A1"}, "lambda": [2], "beta": [1], "cutoff": 80, "projectives": False},
    "shapovalov": {"cartan": {"type": "A1"}, "lambda": [2], "beta": [1], "serre": False},
    "rmatrix": {"N": 2, "modules": [1, 1], "yang_baxter": True, "unitarity": True},
    "fusion": {"N": 3, "a": 0, "b": 1},
    "quiver-from-denominators": {},
    "phi-map": {"quiver": {"type": "A2", "arrows": [[1, 2]]}},
    "verify-g0": {"quiver": {"type": "A2", "arrows": [[1, 2]]}},
    "verify-sl2": {"cartan": {"type": "A1"}, "lambda": [2], "max_height": 3, "cutoff": 12},
}


def validate_config(command, cfg, cutoff=None):
    """Merge defaults, apply ``--cutoff`` and check every key; raises ConfigError."""
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    unknown = sorted(set(cfg) - set(schema))
    if unknown:
        raise ConfigError(f"unknown keys for {command}: {unknown}")
    merged = dict(DEFAULTS[command])
    merged.update(cfg)
    if cutoff is not None:
        if "cutoff" not in schema:
            raise ConfigError(f"{command} takes no cutoff")
        merged["cutoff"] = cutoff
    for key, value in merged.items():
        if not schema[key](value):
            raise ConfigError(f"invalid value for {key!r}: {value!r}")
    if command == "quiver-from-denominators" and "window" not in merged and "J" not in merged:
        raise ConfigError("quiver-from-denominators needs 'window' or an explicit 'J'")
    return merged


# ---------------------------------------------------------------------------
# shared builders
# ---------------------------------------------------------------------------


def _datum(cfg):
    from .cartan import datum_from_config
    try:
        return datum_from_config(cfg["cartan"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad cartan block: {exc}") from None


def _context(cfg):
    from .klr import KLRContext, quiver_q_family
    datum = _datum(cfg)
    if "arrows" in cfg:
        arrows = {}
        for a in cfg["arrows"]:
            arrows[(a[0], a[1])] = a[2] if len(a) == 3 else 1
        return KLRContext(datum, quiver_q_family(datum, arrows))
    return KLRContext(datum)


def _vector(cfg, key, datum):
    v = cfg[key]
    if len(v) != datum.n or any(x < 0 for x in v):
        raise ConfigError(f"{key} must have {datum.n} nonnegative entries")
    return tuple(v)


def _dynkin(cfg):
    from .dynkin import DynkinQuiver, default_height
    try:
        Q = DynkinQuiver.from_config(cfg["quiver"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad quiver block: {exc}") from None
    if "xi" in cfg:
        xi = {int(k) if str(k).lstrip("-").isdigit() else k: int(v) for k, v in cfg["xi"].items()}
    else:
        xi = default_height(Q)
    return Q, xi


def _pass(ok):
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_klr_dim(cfg):
    ctx = _context(cfg)
    beta = _vector(cfg, "beta", ctx.datum)
    cutoff = cfg["cutoff"]
    words = ctx.words(beta=beta)
    blocks = []
    ok = True
    for mu in words:
        for nu in words:
            closed = ctx.graded_dim_hom(mu, nu, cutoff)
            row = {"mu": list(mu), "nu": list(nu), "graded_dim": closed.to_pairs()}
            if cfg["brute_force"]:
                brute = ctx.brute_force_dim_hom(mu, nu, cutoff)
                row["brute_force"] = brute.to_pairs()
                row["agree"] = brute == closed
                ok = ok and row["agree"]
            blocks.append(row)
    return {"blocks": blocks}, ok


def cmd_cyclotomic(cfg):
    from .cyclotomic import build_cyclotomic, categorification_check
    ctx = _context(cfg)
    lam = _vector(cfg, "lambda", ctx.datum)
    beta = _vector(cfg, "beta", ctx.datum)
    A = build_cyclotomic(ctx, lam, beta, cutoff=cfg["cutoff"], max_height=max(4, sum(beta)))
    results = A.summary()
    ok = True
    try:
        results["categorification"] = categorification_check(ctx, lam, beta, algebra=A)
    except IdentityViolation as exc:
        results["categorification"] = {"passed": False, "message": str(exc), "details": exc.details}
        ok = False
    if cfg["projectives"]:
        from .projectives import indecomposable_projectives
        res = indecomposable_projectives(A)
        count = None if res["failed_words"] else len(res["characters"])
        rank = results["categorification"].get("gram_rank")
        results["projectives"] = {
            "count": count,
            "characters": [ch.to_json() for ch in res["characters"]],
            "failed_words": [[list(w), msg] for w, msg in res["failed_words"]],
            "matches_gram_rank": None if count is None else count == rank,
        }
        if count is not None and count != rank:
            ok = False
    return results, ok


def cmd_shapovalov(cfg):
    from .shapovalov import Shapovalov
    datum = _datum(cfg)
    lam = _vector(cfg, "lambda", datum)
    beta = _vector(cfg, "beta", datum)
    form = Shapovalov(datum, lam)
    words, gram = form.gram_matrix(beta)
    results = {
        "words": [list(w) for w in words],
        "gram": [[x.to_pairs() for x in row] for row in gram],
        "rank": form.weight_multiplicity(beta),
    }
    ok = True
    if cfg["serre"]:
        pairs = [(i, j) for i in datum.index for j in datum.index if i != j]
        checks = []
        for i, j in pairs:
            try:
                checks.append({"i": i, "j": j, **form.serre_check(i, j)})
            except IdentityViolation as exc:
                checks.append({"i": i, "j": j, "passed": False, "details": exc.details})
                ok = False
        results["serre"] = checks
    return results, ok


def _affine_module(N, label):
    from .affine import build_vector_rep, fundamental_rep
    if not 1 <= label <= N - 1:
        raise ConfigError(f"fundamental index {label} is outside 1..{N - 1}")
    return build_vector_rep(N) if label == 1 else fundamental_rep(N, label)


def cmd_rmatrix(cfg):
    from .affine import denominator, solve_normalized_rmatrix, unitarity_scalar, yang_baxter_check
    N = cfg["N"]
    if N < 2:
        raise ConfigError("N must be at least 2")
    if len(cfg["modules"]) != 2:
        raise ConfigError("modules must list two fundamental indices")
    M1, M2 = (_affine_module(N, k) for k in cfg["modules"])
    R = solve_normalized_rmatrix(M1, M2)
    d = denominator(R)
    results = {
        "solver": {k: v for k, v in R.report.items() if isinstance(v, (bool, int, str))},
        "denominator": d.to_json(),
        "matrix": R.to_json(),
    }
    ok = bool(R.report.get("unique", True))
    if cfg["yang_baxter"]:
        try:
            results["yang_baxter"] = yang_baxter_check(M1, M2, M2)
        except IdentityViolation as exc:
            results["yang_baxter"] = {"passed": False, "details": exc.details}
            ok = False
    if cfg["unitarity"]:
        results["unitarity_scalar"] = unitarity_scalar(M1, M2).to_json()
    return results, ok


def cmd_fusion(cfg):
    from .affine import ZeroModule, fusion_image
    N, a, b = cfg["N"], cfg["a"], cfg["b"]
    if N < 2 or b < a:
        raise ConfigError("fusion needs N >= 2 and a <= b")
    mod, rep = fusion_image(N, a, b)
    l = b - a + 1
    expected = comb(N, l)
    results = {
        "length": l,
        "points": [2 * k for k in range(a, b + 1)],
        "dimension": mod.dim,
        "expected_dimension": expected,
        "zero": isinstance(mod, ZeroModule),
    }
    if not isinstance(mod, ZeroModule):
        results["weights"] = sorted(list(w) for w in mod.weights)
    return results, mod.dim == expected


def _explicit_datum(cfg):
    from .affine import ZPolynomial
    from .swquiver import DualityDatum

    def lab(x):
        return tuple(x) if isinstance(x, list) else x

    J = [lab(j) for j in cfg["J"]]
    try:
        X = {lab(j): (int(sign), int(m)) for j, (sign, m) in cfg.get("X", [])}
        s = {lab(j): label for j, label in cfg.get("s", [])}
        dens = {(a, b): ZPolynomial.from_text(text) for a, b, text in cfg.get("denominators", [])}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad duality datum: {exc}") from None
    missing = [j for j in J if j not in X or j not in s]
    if missing:
        raise ConfigError(f"vertices without a point or label: {missing}")
    return DualityDatum(J, X, s, dens, name="config")


def cmd_quiver_from_denominators(cfg):
    from .klr import format_two_var
    from .swquiver import build_quiver, instantiate_klr, vector_window_datum
    if "window" in cfg:
        w = cfg["window"]
        try:
            dd = vector_window_datum(int(w["N"]), int(w["lo"]), int(w["hi"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad window: {exc}") from None
    else:
        dd = _explicit_datum(cfg)
    quiver, AJ, qfam = build_quiver(dd)
    results = {
        "datum": dd.to_config(),
        "quiver": quiver.to_json(),
        "cartan": [list(r) for r in AJ.a],
        "q_polynomials": [
            {"i": _plain(i), "j": _plain(j), "Q": format_two_var(qfam.coeffs(i, j))}
            for i in dd.J for j in dd.J if i != j
        ],
    }
    if "beta" in cfg:
        beta = {dd.J[k]: m for k, m in enumerate(cfg["beta"])}
        ctx = instantiate_klr(dd, beta)
        results["klr_support"] = [_plain(v) for v in ctx.datum.index]
    return results, not quiver.has_loops()


def _plain(v):
    return list(v) if isinstance(v, tuple) else v


def cmd_phi_map(cfg):
    from .dynkin import adapted_orders, phi_map
    Q, xi = _dynkin(cfg)
    window = tuple(cfg["window"]) if "window" in cfg else None
    table = phi_map(Q, xi, window)
    report = table.bijection_report()
    orders = adapted_orders(Q)
    results = {
        "xi": {str(k): v for k, v in sorted(xi.items(), key=lambda kv: str(kv[0]))},
        "window": list(table.window),
        "tau": list(table.tau),
        "adapted_orders": [list(o) for o in orders],
        "rows": table.rows(),
        "bijection": report,
    }
    ok = report["injective"] and report["interior_rows_full"] and report["positive_roots"] and 0 in report["full_rows"]
    return results, ok


def cmd_verify_g0(cfg):
    from .dynkin import verify_thm_g0
    Q, xi = _dynkin(cfg)
    window = tuple(cfg["window"]) if "window" in cfg else None
    try:
        return verify_thm_g0(Q, xi, window), True
    except IdentityViolation as exc:
        return {"passed": False, "message": str(exc), "details": exc.details}, False


def cmd_verify_sl2(cfg):
    from .cyclotomic import resolution_dim_check
    from .modules import sl2_suite_check
    ctx = _context(cfg)
    lam = _vector(cfg, "lambda", ctx.datum)
    ok = True
    try:
        results = {"identities": sl2_suite_check(ctx, lam, max_height=cfg["max_height"])}
    except IdentityViolation as exc:
        results = {"identities": {"passed": False, "message": str(exc), "details": exc.details}}
        ok = False
    if cfg.get("resolution", ctx.datum.n == 1):
        if ctx.datum.n != 1:
            raise ConfigError("the resolution check is only run in rank one")
        rows = []
        for h in range(cfg["max_height"] + 1):
            try:
                rows.append(resolution_dim_check(ctx, lam, (h,), ctx.datum.index[0], cfg["cutoff"]))
            except IdentityViolation as exc:
                rows.append(exc.details)
                ok = False
        results["resolution"] = rows
    return results, ok


COMMANDS = {
    "klr-dim": cmd_klr_dim,
    "cyclotomic": cmd_cyclotomic,
    "shapovalov": cmd_shapovalov,
    "rmatrix": cmd_rmatrix,
    "fusion": cmd_fusion,
    "quiver-from-denominators": cmd_quiver_from_denominators,
    "phi-map": cmd_phi_map,
    "verify-g0": cmd_verify_g0,
    "verify-sl2": cmd_verify_sl2,
}


def run(command, cfg, cache_dir=None):
    """Validated config in, ``(report, exit status)`` out.  Module errors become failed reports."""
    key = content_hash(command, cfg, __version__)
    cache = ResultCache(cache_dir) if cache_dir else None
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit, 0 if hit.get("verdict") == "pass" else 1
    try:
        results, ok = COMMANDS[command](cfg)
    except ConfigError:
        raise
    except KLRKitError as exc:
        report = {"command": command, "config": cfg, "verdict": "fail",
                  "error": {"code": exc.code, "message": str(exc)}}
        return report, 1
    report = {"command": command, "config": cfg, "results": results, "verdict": _pass(ok), "version": __version__}
    if cache is not None:
        cache.put(key, report)
    return report, 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="klrkit", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="YAML or JSON config file")
    parser.add_argument("--cutoff", type=int, help="q-degree cutoff (overrides the config)")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--cache", help="directory for cached reports")
    parser.add_argument("--no-cache", action="store_true", help="ignore the cache directory")
    parser.add_argument("--version", action="version", version=f"klrkit {__version__}")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        if args.cutoff is not None and args.cutoff <= 0:
            raise ConfigError("--cutoff must be positive")
        cfg = validate_config(args.command, cfg, args.cutoff)
        cache_dir = None if args.no_cache else args.cache
        report, status = run(args.command, cfg, cache_dir)
    except ConfigError as exc:
        sys.stderr.write(dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return 2
    text = dumps(report)
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
