"""Batch experiment runner.

One JSON config file drives everything; a config plus a seed determines the
reports byte for byte.  Subcommands:

* ``enumerate`` — build (or load) a witness-set snapshot for one machine
  kind/condition/budget and print its size and Kraft sum.
* ``verify``    — run the assertion-class experiments named in the config;
  exit status is nonzero iff an asserted check fails.
* ``report``    — run the measured-only experiments (nothing asserted).
* ``construct`` — build the deficiency-level tables and emit the total
  mixture values plus the measured mixture-to-predictor ratio.

Reports are written in two formats: a structured JSON-lines file with full
value fidelity, and a tabular CSV summary with fractions kept exact and
floats shown to 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bounds as bnd
from . import complexity as cx
from .enumeration import enumerate_witnesses, load_witness_set, save_witness_set
from .errors import ConfigError, KolmlabError, NullEventError
from .kstar import kcorrect_check, kstar_profile, lemma8_report
from .machine import MachineKind
from .measures import (
    MeasureRegistry,
    MixturePredictor,
    Lemma5Measure,
    measure_from_config,
    sample_sequence,
)
from .nu7 import NuConstruction
from .reports import (
    ASSERTED_EXACT,
    MEASURED_ONLY,
    BoundReport,
    render_decimal,
    to_record,
)

VERIFY_SELECTORS = ("eq1", "eq4", "lemma3", "psi", "claim10", "lemma8", "kcorrect", "t4")
REPORT_SELECTORS = ("t1", "t4", "t7", "c2", "c9", "lemma5")
ALL_SELECTORS = tuple(dict.fromkeys(VERIFY_SELECTORS + REPORT_SELECTORS))

_DEFAULT_PARAMS = {
    "eq1_pairs": 10,
    "eq1_horizon": 3,
    "eq4_sequences": 5,
    "eq4_length": 10,
    "lemma3_n": 12,
    "lemma5_ls": [2, 4],
    "lemma8_pairs": 10,
    "lemma8_max_x": 5,
    "lemma8_max_y": 6,
    "psi_l": 3,
    "psi_depth": 5,
    "claim10_depth": 4,
    "claim10_ds": [0, 1, 2, 3],
    "claim10_sample": 0,
    "claim10_sample_depth": 5,
    "kcorrect_L": 12,
    "theorem_triples": 5,
    "horizon": 3,
    "d_window": [-8, 8],
    "construct_depth": 4,
}


@dataclass
class ExperimentConfig:
    L: int
    S: int
    seed: int
    registry_specs: list[dict]
    experiments: list[str]
    structured_path: str
    tabular_path: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        budgets = raw.get("budgets", {})
        experiments = raw.get("experiments", [])
        if not experiments:
            raise ConfigError("experiment selector list must be nonempty")
        unknown = [e for e in experiments if e not in ALL_SELECTORS]
        if unknown:
            raise ConfigError(f"unknown experiment selectors: {unknown}")
        outputs = raw.get("outputs", {})
        params = dict(_DEFAULT_PARAMS)
        params.update(raw.get("params", {}))
        return cls(
            L=budgets.get("L", cx.DEFAULT_L),
            S=budgets.get("S", cx.DEFAULT_S),
            seed=raw.get("seed", 0),
            registry_specs=raw.get("registry", []),
            experiments=list(experiments),
            structured_path=outputs.get("structured", "reports.jsonl"),
            tabular_path=outputs.get("tabular", "reports.csv"),
            params=params,
        )

    def param(self, name):
        return self.params[name]


class _Context:
    """Registry, predictor, and shared caches for one experiment run."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.registry = MeasureRegistry()
        for spec in config.registry_specs:
            self.registry.register(measure_from_config(spec))
        if "lemma5" in config.experiments:
            for l in config.param("lemma5_ls"):
                self.registry.register(Lemma5Measure(l))
        self._predictor = None
        self._nu = None

    @property
    def predictor(self) -> MixturePredictor:
        if self._predictor is None:
            self._predictor = MixturePredictor(
                self.registry, self.config.L, self.config.S
            )
        return self._predictor

    @property
    def nu(self) -> NuConstruction:
        if self._nu is None:
            self._nu = NuConstruction(
                self.registry, self.config.L, self.config.S, self.predictor
            )
        return self._nu

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.config.seed}:{tag}")

    def proper_binary_measures(self):
        return [m for m in self.registry if m.alphabet_size == 2]

    def sampled_bits(self, n: int, tag: str):
        """Deterministic test strings: one sample path per binary measure
        plus uniform random bits."""
        rng = self.rng(tag)
        sequences = []
        for i, m in enumerate(self.proper_binary_measures()):
            symbols = sample_sequence(m, n, rng.randrange(2**32))
            sequences.append("".join(str(s) for s in symbols))
        sequences.append("".join(rng.choice("01") for _ in range(n)))
        return sequences


# --------------------------------------------------------------------------
# Experiment implementations.  Each returns a list of BoundReports.
# --------------------------------------------------------------------------


def _exp_eq1(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    rng = ctx.rng("eq1")
    horizon = cfg.param("eq1_horizon")
    reports = []
    for i in range(cfg.param("eq1_pairs")):
        m = 2 if i % 2 == 0 else 3
        mu = bnd.random_tree_measure(rng, m, horizon)
        rho = bnd.random_tree_semimeasure(rng, m, horizon)
        for kind in bnd.DistanceKind:
            rep = bnd.verify_eq1(mu, rho, (), 1, horizon, kind)
            reports.append(
                BoundReport(
                    name=f"eq1[pair={i},{kind.value}]",
                    lhs=rep.lhs,
                    rhs_terms=rep.rhs_terms,
                    verdict=rep.verdict,
                    tolerance=rep.tolerance,
                    budgets=rep.budgets,
                )
            )
    return reports


def _exp_eq4(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    n = cfg.param("eq4_length")
    reports = []
    for alpha in ctx.sampled_bits(n, "eq4")[: cfg.param("eq4_sequences")]:
        reports.append(bnd.verify_eq4_chain(alpha, ctx.predictor, n))
    return reports


def _exp_lemma3(ctx: _Context) -> list[BoundReport]:
    n = ctx.config.param("lemma3_n")
    reports = []
    for m in ctx.proper_binary_measures():
        try:
            alpha = bnd.lemma3_sequence(m, n)
        except NullEventError:
            # The avoided-symbol construction needs conditionals along its
            # own path; measures without full support cannot supply them.
            continue
        diag = bnd.lemma3_diagnostic_set(m, n)
        violations = 0
        for l in range(1, n + 1):
            avoided = int(alpha[l - 1]) ^ 1
            if not m.conditional((avoided,), alpha[: l - 1]) > bnd._C_LO:
                violations += 1
        ordered = sorted(diag)
        for a, b in zip(ordered, ordered[1:]):
            if b.startswith(a):
                violations += 1
        reports.append(
            BoundReport(
                name=f"lemma3[{m.spec_key()[0]},n={n}]",
                lhs=violations,
                rhs_terms={"allowed_violations": 0},
                relation="==",
                verdict=ASSERTED_EXACT,
                notes=f"alpha={alpha}",
            )
        )
    return reports


def _exp_lemma5(ctx: _Context) -> list[BoundReport]:
    reports = []
    for l in ctx.config.param("lemma5_ls"):
        _, _, rep = bnd.lemma5_instance(l, ctx.predictor)
        reports.append(rep)
    return reports


def _exp_psi(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    l = cfg.param("psi_l")
    depth = cfg.param("psi_depth")
    values: dict[str, Fraction] = {}
    for length in range(depth + 1):
        for v in range(1 << length):
            z = format(v, f"0{length}b") if length else ""
            values[z] = bnd.psi_semimeasure(
                l, z, ctx.registry, cfg.L, cfg.S, ctx.predictor
            )
    worst = Fraction(0)
    for z, val in values.items():
        if len(z) < depth:
            worst = max(worst, values[z + "0"] + values[z + "1"] - val)
    return [
        BoundReport(
            name=f"psi[l={l},depth={depth}]",
            lhs=worst,
            rhs_terms={"zero": 0},
            verdict=ASSERTED_EXACT,
            budgets={"L": cfg.L, "S": cfg.S},
            notes=f"root_value={values['']}",
        ),
        BoundReport(
            name=f"psi-root[l={l}]",
            lhs=values[""],
            rhs_terms={"bound": 1},
            verdict=ASSERTED_EXACT,
            budgets={"L": cfg.L, "S": cfg.S},
        ),
    ]


def _exp_claim10(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    reports = []
    for d in cfg.param("claim10_ds"):
        reports.append(ctx.nu.claim10_verify(d, cfg.param("claim10_depth")))
    sample = cfg.param("claim10_sample")
    if sample:
        for d in cfg.param("claim10_ds"):
            reports.append(
                ctx.nu.claim10_verify(
                    d, cfg.param("claim10_sample_depth"), sample, cfg.seed
                )
            )
    return reports


def _exp_lemma8(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    rng = ctx.rng("lemma8")
    reports = []
    for i in range(cfg.param("lemma8_pairs")):
        x = "".join(rng.choice("01") for _ in range(rng.randrange(1, cfg.param("lemma8_max_x") + 1)))
        y = "".join(rng.choice("01") for _ in range(rng.randrange(0, cfg.param("lemma8_max_y") + 1)))
        rep = lemma8_report(x, y, cfg.L, cfg.S)
        profile = kstar_profile(x, y, cfg.L, cfg.S)
        monotone_ok = all(a >= b for a, b in zip(profile, profile[1:]))
        reports.append(
            BoundReport(
                name=f"lemma8[pair={i}]",
                lhs=rep.lhs + (0 if monotone_ok else 1),
                rhs_terms=rep.rhs_terms,
                relation="==",
                verdict=ASSERTED_EXACT,
                budgets=rep.budgets,
                notes=rep.notes + f"; profile={profile}",
            )
        )
    return reports


def _exp_kcorrect(ctx: _Context) -> list[BoundReport]:
    cfg = ctx.config
    return [kcorrect_check(cfg.param("kcorrect_L"), cfg.S)]


def _theorem_triples(ctx: _Context, tag: str):
    """Deterministic (measure, x, y) triples with mu(xy) > 0."""
    rng = ctx.rng(tag)
    triples = []
    for i in range(ctx.config.param("theorem_triples")):
        measures = ctx.proper_binary_measures()
        mu = measures[i % len(measures)]
        symbols = sample_sequence(mu, 6, rng.randrange(2**32))
        bits = "".join(str(s) for s in symbols)
        cut = rng.randrange(1, 5)
        triples.append((mu, bits[:cut], bits[cut:]))
    return triples


def _exp_t4_verify(ctx: _Context) -> list[BoundReport]:
    return [
        bnd.t4_identity_report(mu, ctx.predictor, x, y)
        for mu, x, y in _theorem_triples(ctx, "t4")
    ]


def _measured_theorem(which):
    def _run(ctx: _Context) -> list[BoundReport]:
        reports = []
        for mu, x, y in _theorem_triples(ctx, which):
            kwargs = {}
            if which in ("c2", "c9"):
                kwargs["horizon"] = ctx.config.param("horizon")
            reports.append(
                bnd.theorem_report(which, mu, x, y, ctx.predictor, **kwargs)
            )
        return reports

    return _run


_VERIFY_FNS = {
    "eq1": _exp_eq1,
    "eq4": _exp_eq4,
    "lemma3": _exp_lemma3,
    "psi": _exp_psi,
    "claim10": _exp_claim10,
    "lemma8": _exp_lemma8,
    "kcorrect": _exp_kcorrect,
    "t4": _exp_t4_verify,
}

_REPORT_FNS = {
    "t1": _measured_theorem("t1"),
    "t4": _measured_theorem("t4"),
    "t7": _measured_theorem("t7"),
    "c2": _measured_theorem("c2"),
    "c9": _measured_theorem("c9"),
    "lemma5": _exp_lemma5,
}


def emit_report(reports: list[BoundReport], format: str, path) -> None:
    """Write reports to disk; 'structured' keeps full value fidelity,
    'tabular' is a CSV summary."""
    path = Path(path)
    if format == "structured":
        with open(path, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(json.dumps(to_record(r), sort_keys=True) + "\n")
    elif format == "tabular":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["name", "lhs", "rhs_terms", "slack", "verdict", "passed", "budgets"]
            )
            for r in reports:
                terms = ";".join(
                    f"{k}={render_decimal(v)}" for k, v in r.rhs_terms.items()
                )
                budgets = ";".join(
                    f"{k}={render_decimal(v)}" for k, v in r.budgets.items()
                )
                writer.writerow(
                    [
                        r.name,
                        render_decimal(r.lhs),
                        terms,
                        render_decimal(r.slack),
                        r.verdict,
                        "pass" if r.passed else "FAIL",
                        budgets,
                    ]
                )
    else:
        raise ConfigError(f"unknown report format {format!r}")


def run_experiment(
    config: ExperimentConfig, selectors=None, out_dir=".", formats=("structured", "tabular")
) -> tuple[int, list[BoundReport]]:
    """Run the configured experiments in declared order and write reports.

    Exit status is nonzero exactly when an AssertedExact report fails.
    """
    ctx = _Context(config)
    reports: list[BoundReport] = []
    for name in config.experiments:
        reports.extend(_run_selector(ctx, name, selectors))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if "structured" in formats:
        emit_report(reports, "structured", out_dir / config.structured_path)
    if "tabular" in formats:
        emit_report(reports, "tabular", out_dir / config.tabular_path)
    failed = [r for r in reports if not r.passed]
    return (1 if failed else 0), reports


def _run_selector(ctx, name, mode):
    if mode == "verify":
        fn = _VERIFY_FNS.get(name)
    elif mode == "report":
        fn = _REPORT_FNS.get(name)
    else:
        fn = _VERIFY_FNS.get(name) or _REPORT_FNS.get(name)
    return fn(ctx) if fn else []


# --------------------------------------------------------------------------
# Command-line front end.
# --------------------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out-dir", default=".", help="directory for report files")
    parser.add_argument("--budget-L", type=int, default=None)
    parser.add_argument("--budget-S", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--format",
        choices=["structured", "tabular", "both"],
        default="both",
    )


def _load_config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config)
    if args.budget_L is not None:
        config.L = args.budget_L
    if args.budget_S is not None:
        config.S = args.budget_S
    if args.seed is not None:
        config.seed = args.seed
    return config


def _formats(args):
    return ("structured", "tabular") if args.format == "both" else (args.format,)


def _print_summary(reports):
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.verdict:<12} {r.name}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kolmlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="build or load a witness-set snapshot")
    p_enum.add_argument("--kind", required=True, choices=[k.name for k in MachineKind])
    p_enum.add_argument("--condition", default=None)
    p_enum.add_argument("--budget-L", type=int, default=cx.DEFAULT_L)
    p_enum.add_argument("--budget-S", type=int, default=cx.DEFAULT_S)
    p_enum.add_argument(
        "--cache-dir", default=os.environ.get("KOLMLAB_CACHE_DIR", None)
    )

    for name in ("verify", "report", "construct"):
        _add_common(sub.add_parser(name))

    args = parser.parse_args(argv)
    try:
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        config = _load_config(args)
        if args.command == "verify":
            code, reports = run_experiment(
                config, selectors="verify", out_dir=args.out_dir, formats=_formats(args)
            )
            _print_summary(reports)
            return code
        if args.command == "report":
            _, reports = run_experiment(
                config, selectors="report", out_dir=args.out_dir, formats=_formats(args)
            )
            _print_summary(reports)
            return 0
        if args.command == "construct":
            return _cmd_construct(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KolmlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


def _cmd_enumerate(args) -> int:
    kind = MachineKind[args.kind]
    condition = args.condition
    if condition is not None and condition == "e":
        condition = ""
    cache_path = None
    if args.cache_dir:
        cond_tag = "none" if condition is None else (condition or "e")
        cache_path = Path(args.cache_dir) / (
            f"witness-{kind.name}-{cond_tag}-L{args.budget_L}-S{args.budget_S}.txt"
        )
    if cache_path and cache_path.exists():
        ws = load_witness_set(cache_path)
        origin = "loaded"
    else:
        ws = enumerate_witnesses(kind, condition, args.budget_L, args.budget_S)
        origin = "enumerated"
        if cache_path:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            save_witness_set(ws, cache_path)
    print(
        f"{origin} {len(ws.witnesses)} witnesses for {kind.name}"
        f" condition={condition!r} L={ws.L} S={ws.S};"
        f" kraft={ws.kraft_sum} prefix_free={ws.is_prefix_free()}"
    )
    return 0


def _cmd_construct(args, config: ExperimentConfig) -> int:
    ctx = _Context(config)
    depth = config.param("construct_depth")
    window = tuple(config.param("d_window"))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / "nu_tables.jsonl"
    weights, unwitnessed = ctx.nu.d_weights(window)
    worst_ratio = Fraction(0)
    worst_node = ""
    with open(table_path, "w", encoding="utf-8") as fh:
        for length in range(depth + 1):
            for v in range(1 << length):
                z = format(v, f"0{length}b") if length else ""
                total = ctx.nu.nu_total(z, window, depth)
                xi = ctx.predictor.mass(z)
                if xi > 0 and total / xi > worst_ratio:
                    worst_ratio = total / xi
                    worst_node = z
                fh.write(
                    json.dumps(
                        {
                            "z": z,
                            "nu_total": f"{total.numerator}/{total.denominator}",
                            "per_d": {
                                str(d): (
                                    lambda val: f"{val.numerator}/{val.denominator}"
                                )(ctx.nu.nu_fixup(d, depth).values[z])
                                for d in weights
                            },
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
    ratio_report = BoundReport(
        name=f"nu-ratio[depth={depth}]",
        lhs=worst_ratio,
        rhs_terms={"worst_node": 0},
        verdict=MEASURED_ONLY,
        budgets={"L": config.L, "S": config.S},
        notes=(
            f"max nu_total/predictor over nodes to depth {depth} at z={worst_node or 'e'};"
            f" unwitnessed_levels={unwitnessed}"
        ),
    )
    emit_report([ratio_report], "structured", out_dir / config.structured_path)
    emit_report([ratio_report], "tabular", out_dir / config.tabular_path)
    print(f"wrote {table_path} and ratio report; max ratio {float(worst_ratio):.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
