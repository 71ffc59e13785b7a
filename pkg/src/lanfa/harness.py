"""Experiment harness: resolves JSON configs into problem instances, runs the
convergence / bound / sweep experiments, and writes deterministic CSV + JSON
artifacts into a run directory.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import gmpy2

from . import approx, bounds, funcs, instances, krylov, matfunc, optimal, xlinalg
from .errors import DomainError, LanfaError, ParameterError
from .precision import ENV_BITS, Precision, mpf

VERSION = "1.0.0"
FAILED = matfunc.FAILED
EXACT = optimal.EXACT

CSV_COLUMNS = [
    "spectrum",
    "function",
    "k",
    "err_lanczos_fa",
    "err_opt2",
    "ratio",
    "bound_rational",
    "bound_uniform",
    "bound_triangle",
    "err_lanczos_or",
    "status",
]

SWEEP_COLUMNS = [
    "method",
    "kappa",
    "q",
    "worst_ratio",
    "best_k",
    "prefactor",
    "reference",
]


def fmt(x):
    """Serialize a value for CSV: sentinels verbatim, reals at 25 sig digits."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    v = mpf(x)
    if not gmpy2.is_finite(v):
        raise LanfaError(f"cannot serialize non-finite value {v!r}")
    if v == 0:
        return "0.000000000000000000000000e+00"
    digits, exp, _ = v.digits(10, 25)
    sign = ""
    if digits.startswith("-"):
        sign, digits = "-", digits[1:]
    return f"{sign}{digits[0]}.{digits[1:]}e{exp - 1:+03d}"


# --- configuration ------------------------------------------------------------

DEFAULT_SPECTRA_PD = [
    {"kind": "uniform", "label": "uniform", "params": {"d": 100, "lo": 1, "hi": 100}},
    {"kind": "geometric", "label": "geometric", "params": {"d": 100, "lo": 1, "hi": 100}},
    {
        "kind": "cluster_outlier",
        "label": "cluster_outlier",
        "params": {"d": 100, "outlier": 1, "cluster_lo": 90, "cluster_hi": 100},
    },
]

FIG_DEFAULTS = {
    "fig1": {
        "experiment": "fig1",
        "spectra": DEFAULT_SPECTRA_PD,
        "b": {"kind": "ones"},
        "functions": ["inv_power:1", "sqrt", "exp:t=1,sign=-1"],
        "k_max": 60,
    },
    "fig2": {
        "experiment": "fig2",
        "spectra": DEFAULT_SPECTRA_PD,
        "b": {"kind": "ones"},
        "functions": ["pade_exp:m=5;negate=1", "zolotarev_sqrt:degree=13"],
        "k_max": 60,
        "with_rational_bound": True,
        "with_uniform_bound": True,
    },
    "fig3": {
        "experiment": "fig3",
        "spectra": [
            {
                "kind": "indefinite_symmetric",
                "label": "indefinite_symmetric",
                "params": {"d": 100, "inner": 1, "outer": 100},
            }
        ],
        "b": {"kind": "ones"},
        "functions": [
            "rational:numer=[1];poles=[0]",
            "rational:numer=[1];poles=[-5,5]",
            "sign",
        ],
        "k_max": 60,
    },
    "fig4": {
        "experiment": "sweep",
        "func": "inv_power",
        "methods": ["lanczos_fa", "lanczos_or"],
        "qs": [1, 2, 4, 8, 16, 32, 64],
        "or_qs": [2, 4, 6],
        "kappas": [1e2, 1e3, 1e4, 1e5, 1e6],
        "or_kappas": [1e2, 1e3, 1e4],
        "d": 100,
        "k_max": 12,
        "budget": 6,
        "seed": 2718,
    },
    "fig5": {
        "experiment": "fig5",
        "spectra": [
            {
                "kind": "two_clusters",
                "label": "two_clusters",
                "params": {"d1": 10, "c1": 1, "width1": 0.005, "d2": 90, "c2": 100, "width2": 0.5},
            }
        ],
        "b": {"kind": "ones"},
        "functions": ["sqrt"],
        "candidates": [f"zolotarev_sqrt:degree={n}" for n in (3, 5, 7, 9, 13)],
        "k_max": 60,
        "with_triangle_bound": True,
    },
}

ARTIFACT_CHOICES = {
    "cluster_outlier_width": "[90, 100] at d=100",
    "two_cluster_widths": "plus/minus 0.5 percent of each cluster center",
    "pade_type": "diagonal [5/5] composed with x -> -x",
    "zolotarev_type": "(n, n-1) with all-real negative poles",
    "k_max_default": "min(grade, 60)",
    "inside_pole_choices": "single pole at 0; pole pair at -5, 5",
    "adversarial_search": "multi-start random directions plus coordinate hill climbing",
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    spectra: tuple = ()
    b: dict = field(default_factory=lambda: {"kind": "ones"})
    functions: tuple = ()
    candidates: tuple = ()
    k_max: int = 60
    precision_bits: int = 0
    grid: int = 2000
    seed: int = 0
    with_rational_bound: bool = False
    with_uniform_bound: bool = False
    with_triangle_bound: bool = False
    # sweep-only fields
    func: str = "inv_power"
    methods: tuple = ("lanczos_fa",)
    qs: tuple = ()
    or_qs: tuple = ()
    kappas: tuple = ()
    or_kappas: tuple = ()
    d: int = 100
    budget: int = 6


def resolve_config(raw):
    """Fill defaults, apply the precision env override, and validate."""
    if not isinstance(raw, dict):
        raise ParameterError("config must be a JSON object")
    raw = dict(raw)
    bits = int(raw.pop("precision_bits", 0)) or None
    env = os.environ.get(ENV_BITS)
    if env:
        bits = int(env)
    precision = Precision(bits) if bits else Precision()
    exp = raw.pop("experiment", None)
    if exp is None:
        raise ParameterError("config field 'experiment' is required")
    if "spectrum" in raw:
        raw["spectra"] = [raw.pop("spectrum")]
    known = set(ExperimentConfig.__dataclass_fields__)
    for key in raw:
        if key not in known:
            raise ParameterError(f"unknown config field {key!r}")
    cfg = ExperimentConfig(
        experiment=exp,
        spectra=tuple(raw.get("spectra", ())),
        b=raw.get("b", {"kind": "ones"}),
        functions=tuple(raw.get("functions", ())),
        candidates=tuple(raw.get("candidates", ())),
        k_max=int(raw.get("k_max", 60)),
        precision_bits=precision.bits,
        grid=int(raw.get("grid", 2000)),
        seed=int(raw.get("seed", 0)),
        with_rational_bound=bool(raw.get("with_rational_bound", False)),
        with_uniform_bound=bool(raw.get("with_uniform_bound", False)),
        with_triangle_bound=bool(raw.get("with_triangle_bound", False)),
        func=raw.get("func", "inv_power"),
        methods=tuple(raw.get("methods", ("lanczos_fa",))),
        qs=tuple(raw.get("qs", ())),
        or_qs=tuple(raw.get("or_qs", ())),
        kappas=tuple(raw.get("kappas", ())),
        or_kappas=tuple(raw.get("or_kappas", ())),
        d=int(raw.get("d", 100)),
        budget=int(raw.get("budget", 6)),
    )
    if cfg.k_max < 1:
        raise ParameterError(f"config field 'k_max' must be >= 1, got {cfg.k_max}")
    return cfg, precision


def fig_config(fig_id):
    if str(fig_id) not in ("1", "2", "3", "4", "5"):
        raise ParameterError(f"unknown figure id {fig_id!r}; known: 1..5")
    return json.loads(json.dumps(FIG_DEFAULTS[f"fig{fig_id}"]))


def build_instance(spec, b_spec, precision, f_for_adversarial=None, k_max=10):
    """Instance from a spectrum spec plus a right-hand-side spec."""
    params = dict(spec.get("params", {}))
    lam = instances.spectrum(spec["kind"], precision, **params)
    kind = b_spec.get("kind", "ones")
    with precision.ctx():
        if kind == "ones":
            w = instances.ones_b(len(lam))
        elif kind == "explicit":
            w = tuple(mpf(x) for x in b_spec["values"])
        elif kind == "adversarial":
            if f_for_adversarial is None:
                raise ParameterError("adversarial b needs a target function")
            w, _, _ = instances.adversarial_b(
                lam,
                f_for_adversarial,
                k_max,
                int(b_spec.get("budget", 6)),
                int(b_spec.get("seed", 0)),
                precision,
            )
        else:
            raise ParameterError(f"unknown b kind {kind!r}")
        return instances.ProblemInstance(tuple(lam), tuple(w), precision)


def resolve_function(text, inst):
    """Function spec -> ScalarFunction; constructed approximants allowed."""
    if text.startswith("pade_exp:"):
        opts = _parse_opts(text.split(":", 1)[1])
        r = approx.pade_exp(int(opts.get("m", 5)))
        if opts.get("negate") in ("1", "true"):
            r = r.compose_negate()
        return funcs.Rational(r)
    if text.startswith("zolotarev_sqrt:"):
        opts = _parse_opts(text.split(":", 1)[1])
        lo = mpf(opts["lo"]) if "lo" in opts else inst.lam_min
        hi = mpf(opts["hi"]) if "hi" in opts else inst.lam_max
        r = approx.zolotarev_sqrt((lo, hi), int(opts.get("degree", 13)))
        return funcs.Rational(r)
    return funcs.parse_function(text)


def _parse_opts(text):
    out = {}
    for part in text.split(";"):
        for item in part.split(","):
            if "=" in item:
                key, val = item.split("=", 1)
                out[key.strip()] = val.strip()
    return out


# --- convergence experiments --------------------------------------------------

def convergence_rows(cfg, precision):
    """Rows of the per-iteration convergence report for every curve."""
    rows = []
    for spec in cfg.spectra:
        label = spec.get("label", spec["kind"])
        inst = build_instance(spec, cfg.b, precision)
        with precision.ctx():
            k_max = min(cfg.k_max, krylov.krylov_grade(inst))
            decomp = krylov.lanczos(inst, k_max)
            for ftext in cfg.functions:
                f = resolve_function(ftext, inst)
                rows.extend(
                    _curve_rows(cfg, inst, decomp, label, ftext, f, k_max)
                )
    return rows


def _curve_rows(cfg, inst, decomp, label, ftext, f, k_max):
    errs = matfunc.lanczos_fa_series(inst, f, k_max, decomp)
    _, opt2 = optimal.optimal_error_series(inst, f, k_max, optimal.TwoNorm(), decomp)
    ratios = optimal.optimality_ratio_series(inst, f, k_max, "lanczos_fa", decomp)
    nb = inst.norm_b()

    rbounds = [None] * k_max
    rf = funcs.as_rational(f)
    if cfg.with_rational_bound and rf is not None and rf.poles:
        q = len(rf.poles)
        first_k = max(q, rf.numer_degree + 1)
        if first_k <= k_max:
            rep = bounds.rational_bound(inst, rf, first_k, decomp)
            _, terrs = optimal.optimal_error_series(
                inst, funcs.Rational(rf), k_max, optimal.TwoNorm(), decomp
            )
            for k in range(first_k, k_max + 1):
                rbounds[k - 1] = rep.prefactor * terrs[k - q]

    ubounds = [None] * k_max
    if cfg.with_uniform_bound:
        for k in range(1, k_max + 1):
            ubounds[k - 1] = bounds.uniform_bound(inst, f, k, cfg.grid) * nb

    tbounds = [None] * k_max
    if cfg.with_triangle_bound and cfg.candidates:
        cands = []
        for ctext in cfg.candidates:
            cf = resolve_function(ctext, inst)
            crf = funcs.as_rational(cf)
            if crf is None:
                raise ParameterError(f"candidate {ctext!r} is not rational")
            cands.append(crf)
        series = bounds.triangle_bound_series(
            inst, f, k_max, cands, cfg.grid, decomp
        )
        tbounds = [b for b, _ in series]

    out = []
    for k in range(1, k_max + 1):
        err = errs[k - 1]
        ratio = ratios[k - 1]
        status = "ok"
        if isinstance(err, str):
            status = FAILED
        elif isinstance(ratio, str) and ratio == EXACT:
            status = EXACT
        out.append(
            {
                "spectrum": label,
                "function": ftext,
                "k": k,
                "err_lanczos_fa": err,
                "err_opt2": opt2[k - 1],
                "ratio": ratio,
                "bound_rational": rbounds[k - 1],
                "bound_uniform": ubounds[k - 1],
                "bound_triangle": tbounds[k - 1],
                "err_lanczos_or": None,
                "status": status,
            }
        )
    return out


# --- adversarial sweeps -------------------------------------------------------

def sweep_rows(cfg, precision):
    """Worst observed optimality ratios over a (kappa, q) grid."""
    rows = []
    for method in cfg.methods:
        qs = cfg.or_qs if (method == "lanczos_or" and cfg.or_qs) else cfg.qs
        kappas = cfg.or_kappas if (method == "lanczos_or" and cfg.or_kappas) else cfg.kappas
        for kappa in kappas:
            for q in qs:
                rows.append(_sweep_cell(cfg, precision, method, mpf(kappa), int(q)))
    return rows


def _sweep_cell(cfg, precision, method, kappa, q):
    with precision.ctx():
        lam = instances.spectrum("tight_cluster", precision, d=cfg.d, kappa=kappa)
        f = funcs.InvPower(q)
        seed = cfg.seed * 1000003 + int(q) * 101 + int(gmpy2.log10(kappa))
        w, ratio, best_k = instances.adversarial_b(
            lam, f, cfg.k_max, cfg.budget, seed, precision, method
        )
        prefactor = mpf(q) * kappa**q
        if method == "lanczos_fa":
            reference = gmpy2.sqrt(mpf(q) * kappa)
        else:
            reference = kappa ** (mpf(q) / 2)
        return {
            "method": method,
            "kappa": kappa,
            "q": q,
            "worst_ratio": ratio,
            "best_k": best_k,
            "prefactor": prefactor,
            "reference": reference,
        }


# --- verification suites ------------------------------------------------------

def verify(suite, precision=None):
    """Run a named invariant battery; returns a dict with per-check results."""
    precision = precision or Precision()
    runner = {
        "lemmas": _verify_lemmas,
        "bounds": _verify_bounds,
        "indefinite": _verify_indefinite,
        "hard_instance": _verify_hard_instance,
    }.get(suite)
    if runner is None:
        raise ParameterError(
            f"unknown suite {suite!r}; known: lemmas, bounds, indefinite, hard_instance"
        )
    checks = runner(precision)
    return {"suite": suite, "ok": all(c["ok"] for c in checks), "checks": checks}


def _random_pd_instance(rng, precision, d_max=30):
    d = rng.randint(4, d_max)
    lo = mpf(1 + rng.random())
    hi = lo * mpf(2 + 8 * rng.random())
    lam = instances.spectrum("uniform", precision, d=d, lo=lo, hi=hi)
    w = tuple(mpf(rng.gauss(0, 1) or 1) for _ in range(d))
    return instances.ProblemInstance(tuple(lam), w, precision)


def _verify_lemmas(precision):
    import random

    rng = random.Random(987654321)
    checks = []
    tol = precision.tol
    with precision.ctx():
        for trial in range(20):
            inst = _random_pd_instance(rng, precision)
            q = rng.randint(1, 4)
            poles = tuple(
                sorted(-mpf(rng.random() * 3 + 0.1) for _ in range(q))
            )
            r = funcs.RationalFunction((mpf(1),), poles)
            scale = xlinalg.norm2(matfunc.exact_apply(inst, funcs.Rational(r)))
            k = rng.randint(max(1, q), min(inst.d, 8))
            j = rng.randint(1, q)
            dev1 = optimal.verify_shifted_projection(inst, r, j, k)
            checks.append(
                {
                    "name": f"shifted-projection trial {trial} (q={q}, j={j}, k={k})",
                    "deviation": float(dev1),
                    "threshold": float(10 * tol * scale),
                    "ok": bool(dev1 <= 10 * tol * max(scale, mpf(1))),
                }
            )
            dev2 = optimal.verify_error_decomposition(inst, r, k)
            checks.append(
                {
                    "name": f"error-decomposition trial {trial} (q={q}, k={k})",
                    "deviation": float(dev2),
                    "threshold": float(10 * q * tol * scale),
                    "ok": bool(dev2 <= 10 * q * tol * max(scale, mpf(1))),
                }
            )
    return checks


def _verify_bounds(precision):
    import random

    rng = random.Random(24681012)
    checks = []
    tol = precision.tol
    with precision.ctx():
        for trial in range(5):
            inst = _random_pd_instance(rng, precision, d_max=20)
            q = rng.randint(1, 3)
            poles = tuple(sorted(-mpf(rng.random() * 2 + 0.1) for _ in range(q)))
            r = funcs.RationalFunction((mpf(1),), poles)
            exact = matfunc.exact_apply(inst, funcs.Rational(r))
            scale = xlinalg.norm2(exact)
            for k in range(q, min(inst.d, 8) + 1):
                rep = bounds.rational_bound(inst, r, k)
                fa = matfunc.lanczos_fa(inst, funcs.Rational(r), k)
                err = xlinalg.norm2(xlinalg.sub(exact, fa))
                if rep.opt_err_shifted <= tol * max(scale, mpf(1)):
                    continue
                checks.append(
                    {
                        "name": f"rational bound trial {trial} k={k}",
                        "deviation": float(err),
                        "threshold": float(rep.bound + tol * scale),
                        "ok": bool(err <= rep.bound + tol * max(scale, mpf(1))),
                    }
                )
        for k in range(1, 21):
            E = bounds.inv_minimax_exact((1, 100), k)
            ba = approx.remez_best_poly(lambda x: 1 / x, (1, 100), k - 1, precision)
            rel = abs(E - ba.error) / E
            checks.append(
                {
                    "name": f"inv minimax closed form k={k}",
                    "deviation": float(rel),
                    "threshold": 5e-7,
                    "ok": bool(rel <= mpf("5e-7")),
                }
            )
    return checks


def _verify_indefinite(precision):
    checks = []
    with precision.ctx():
        lam = instances.spectrum("indefinite_symmetric", precision, d=100, inner=1, outer=100)
        inst = instances.ProblemInstance(tuple(lam), instances.ones_b(100), precision)
        grade = krylov.krylov_grade(inst)
        decomp = krylov.lanczos(inst, grade)
        tol = precision.tol
        mres = bounds.minres_residuals(inst, grade, decomp)
        cres = bounds.cg_residuals(inst, grade, decomp)
        lhs = inst.norm_b()  # the zero iterate is always admissible
        for k in range(1, grade + 1):
            if cres[k - 1] is not bounds.FAILED and cres[k - 1] < lhs:
                lhs = cres[k - 1]
            rk = mpf(k)
            rhs = (gmpy2.exp(mpf(1)) * gmpy2.sqrt(rk) + 1 / gmpy2.sqrt(rk)) * mres[k]
            checks.append(
                {
                    "name": f"residual near-optimality k={k}",
                    "deviation": float(lhs),
                    "threshold": float(rhs),
                    "ok": bool(lhs <= rhs + tol * inst.norm_b()),
                }
            )
        dev = bounds.verify_cg_minres_relation(inst, grade, decomp)
        checks.append(
            {
                "name": "residual relation (indefinite)",
                "deviation": float(dev),
                "threshold": float(100 * tol),
                "ok": bool(dev <= 100 * tol),
            }
        )
    return checks


def _verify_hard_instance(precision):
    checks = []
    f = funcs.InvPower(1)
    with precision.ctx():
        for k in range(1, 9):
            hard = instances.hard_instance(f, (1, 100), k, precision)
            gerrs, _ = optimal.optimal_error_series(
                hard.instance, f, k, optimal.TwoNorm()
            )
            rel = abs(gerrs[k - 1] / hard.instance.norm_b() - hard.epsilon) / hard.epsilon
            checks.append(
                {
                    "name": f"hard instance k={k}",
                    "deviation": float(rel),
                    "threshold": 5e-10,
                    "ok": bool(rel <= mpf("5e-10")),
                }
            )
    return checks


# --- artifact output ----------------------------------------------------------

def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c)) for c in columns])


def run(raw_config, out_dir):
    """Run one experiment config and write report.csv / meta.json / index.json."""
    cfg, precision = resolve_config(raw_config)
    os.makedirs(out_dir, exist_ok=True)
    if cfg.experiment == "sweep":
        rows = sweep_rows(cfg, precision)
        columns = SWEEP_COLUMNS
        kind = "sweep"
    elif cfg.experiment in ("fig1", "fig2", "fig3", "fig5", "convergence"):
        rows = convergence_rows(cfg, precision)
        columns = CSV_COLUMNS
        kind = "convergence"
    else:
        raise ParameterError(f"unknown experiment {cfg.experiment!r}")

    report = os.path.join(out_dir, "report.csv")
    write_csv(report, columns, rows)

    meta = {
        "version": VERSION,
        "experiment": cfg.experiment,
        "kind": kind,
        "precision_bits": precision.bits,
        "columns": columns,
        "config": _jsonable(cfg),
        "artifact_choices": ARTIFACT_CHOICES,
    }
    with open(os.path.join(out_dir, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    index = {
        "experiment": cfg.experiment,
        "kind": kind,
        "files": ["report.csv", "meta.json"],
        "rows": len(rows),
    }
    with open(os.path.join(out_dir, "index.json"), "w") as fh:
        json.dump(index, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows


def _jsonable(cfg):
    out = {}
    for name in ExperimentConfig.__dataclass_fields__:
        val = getattr(cfg, name)
        if isinstance(val, tuple):
            val = [v if not isinstance(v, (gmpy2.mpfr,)) else float(v) for v in val]
        out[name] = val
    return out
