"""Parameter sweeps measuring operator-norm ratios over the corpus.

Every sweep produces one row per (corpus item, smoothness index, N) with
numerator and denominator quasi-norms. Corpus items are independent work
units; with jobs > 1 they are spread over a process pool whose workers each
build their own wavelet and corpus from the config. Rows are returned in
canonical order either way.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..analysis.coefficients import CoefficientField
from ..analysis.transform import analyze
from ..config import ExperimentConfig
from ..grid.functions import DyadicGrid, GridFunction
from ..grid.operators import martingale_difference, seq_norms
from ..norms.quasinorms import SmoothnessIndex, b_quasinorm, f_quasinorm
from ..norms.regions import boundary_distance, region_theorem, region_unconditional, theorem_bounds
from ..output.results import RatioReport, RatioRow
from ..wavelets.cascade import SampledWavelet, cascade_sample
from ..wavelets.filters import daubechies_filter
from .corpus import CorpusItem, make_corpus
from .operators import get_operator

logger = logging.getLogger(__name__)


@dataclass
class SweepContext:
    """Wavelet, grid and corpus shared by all sweeps of a run."""

    config: ExperimentConfig
    grid: DyadicGrid
    wavelet: SampledWavelet
    corpus: list[CorpusItem]
    _expectations: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, config: ExperimentConfig) -> "SweepContext":
        grid = DyadicGrid(J=config.J, x0=config.x0, x1=config.x1)
        wavelet = cascade_sample(daubechies_filter(config.order), config.J)
        corpus = make_corpus(config.families, config.seed, wavelet, grid, config.j_max, config.margin)
        return cls(config=config, grid=grid, wavelet=wavelet, corpus=corpus)

    def with_config(self, config: ExperimentConfig) -> "SweepContext":
        """Same wavelet, corpus and cache under a config that differs only in sweep options."""
        return SweepContext(config, self.grid, self.wavelet, self.corpus, self._expectations)

    def analyze(self, g: GridFunction) -> CoefficientField:
        return analyze(g, self.wavelet, self.config.j_max, margin=self.config.margin)

    def expectation(self, item: int, N: int) -> CoefficientField:
        """Coefficients of E_N f for corpus item ``item``, computed once per run."""
        key = (item, N)
        if key not in self._expectations:
            f = self.corpus[item].function
            self._expectations[key] = self.analyze(get_operator("E").apply(f, N))
        return self._expectations[key]


def _row(
    experiment: str,
    label: str,
    idx: SmoothnessIndex,
    N: int,
    num: float,
    den: float,
    unconditional: bool = False,
    extra: Optional[dict] = None,
) -> Optional[RatioRow]:
    if not den > 0:
        logger.warning(f"{experiment}: zero denominator for {label} at N={N}, row skipped")
        return None
    return RatioRow(
        experiment=experiment,
        family=label,
        p=idx.p,
        q=idx.q,
        s=idx.s,
        r=idx.r,
        N=N,
        num=num,
        den=den,
        ratio=num / den,
        in_theorem=region_theorem(idx),
        in_uncond=region_unconditional(idx),
        bdist=boundary_distance(idx, unconditional=unconditional),
        extra=extra or {},
    )


class _Collector:
    def __init__(self):
        self.rows: list[RatioRow] = []
        self.skipped = 0

    def add(self, row: Optional[RatioRow]):
        if row is None:
            self.skipped += 1
        else:
            self.rows.append(row)

    def result(self) -> tuple[list[RatioRow], int]:
        return self.rows, self.skipped


def _f_indices(indices: list[SmoothnessIndex]) -> list[SmoothnessIndex]:
    return [idx for idx in indices if not math.isinf(idx.p)]


def _en_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    for idx in _f_indices(ctx.config.smoothness_indices()):
        den = f_quasinorm(item.coefficients, idx, ctx.grid)
        for N in ctx.config.n_values:
            out.add(_row("en", item.label, idx, N, f_quasinorm(ctx.expectation(i, N), idx, ctx.grid), den))
    return out.result()


def _pn_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    # P_N acts on coefficients directly: no synthesis or re-analysis needed.
    item, out = ctx.corpus[i], _Collector()
    for idx in _f_indices(ctx.config.smoothness_indices()):
        den = f_quasinorm(item.coefficients, idx, ctx.grid)
        for N in ctx.config.n_values:
            num = f_quasinorm(item.coefficients.truncated(N), idx, ctx.grid)
            out.add(_row("pn", item.label, idx, N, num, den))
    return out.result()


def _enpn_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    indices = [index.to_index() for index in [*ctx.config.indices, *ctx.config.probe_indices]]
    for idx in indices:
        den = b_quasinorm(item.coefficients, idx, q=math.inf)
        for N in ctx.config.n_values:
            difference = ctx.expectation(i, N) - item.coefficients.truncated(N)
            out.add(_row("enpn", item.label, idx, N, b_quasinorm(difference, idx, q=idx.r), den))
    return out.result()


def _enb_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    for idx in ctx.config.smoothness_indices():
        den = b_quasinorm(item.coefficients, idx, q=math.inf)
        for N in ctx.config.n_values:
            num = b_quasinorm(ctx.expectation(i, N), idx, q=idx.r)
            out.add(_row("enb", item.label, idx, N, num, den))
    return out.result()


def _tn_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    indices = ctx.config.smoothness_indices()
    dens = [b_quasinorm(item.coefficients, idx, q=math.inf) for idx in indices]
    for a_family in ctx.config.tn_families:
        operator = get_operator("T", family=a_family, seed=ctx.config.seed, stream=item.label)
        for N in ctx.config.n_values:
            image = operator.apply(item.function, N)
            coefficients = ctx.analyze(image)
            extra = {}
            if a_family == "ones":
                difference = image - martingale_difference(item.function, N)
                extra["dn_diff"] = float(np.max(np.abs(difference.values)))
            for idx, den in zip(indices, dens):
                num = b_quasinorm(coefficients, idx, q=idx.r)
                out.add(_row(f"tn-{a_family}", item.label, idx, N, num, den, extra=dict(extra)))
    return out.result()


def _mult_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    config = ctx.config
    indices = [index.to_index() for index in [*config.indices, *config.mult_indices]]

    for b_family in config.mult_families:
        if b_family == "random_signs":
            if item.family not in config.multiplier_families:
                continue
            draws = [(f"{item.label}~b{k}", f"{item.label}:{k}") for k in range(config.multiplier_seeds)]
        else:
            draws = [(item.label, item.label)]

        for label, stream in draws:
            operator = get_operator("S", family=b_family, seed=config.seed, stream=stream)
            for N in config.n_values:
                b = operator.multiplier(item.function, N)
                sup, bv = seq_norms(b)
                coefficients = ctx.analyze(operator.apply(item.function, N))
                extra = {"sup": sup, "bv": bv}
                for scale in config.mult_scales:
                    for idx in indices:
                        if scale == "F":
                            if math.isinf(idx.p):
                                continue
                            num = f_quasinorm(coefficients, idx, ctx.grid)
                            den = f_quasinorm(item.coefficients, idx, ctx.grid)
                        else:
                            num = b_quasinorm(coefficients, idx)
                            den = b_quasinorm(item.coefficients, idx)
                        out.add(_row(
                            f"mult-{b_family}-{scale}", label, idx, N, num, den,
                            unconditional=(scale == "F"), extra=dict(extra),
                        ))
    return out.result()


def boundary_indices(config: ExperimentConfig) -> list[SmoothnessIndex]:
    """s placed at signed distances from both theorem-region edges for every (p, q)."""
    indices = []
    for p, q in config.boundary.pairs:
        base = SmoothnessIndex(p=p, q=q, s=0.0)
        lower, upper = theorem_bounds(base)
        for d in config.boundary.distances:
            for s in (lower + d, upper - d):
                idx = base.with_s(round(s, 12))
                if idx not in indices:
                    indices.append(idx)
    return _f_indices(indices)


def _boundary_rows(ctx: SweepContext, i: int) -> tuple[list[RatioRow], int]:
    item, out = ctx.corpus[i], _Collector()
    if item.family not in ctx.config.boundary.families:
        return out.result()
    for idx in boundary_indices(ctx.config):
        den = f_quasinorm(item.coefficients, idx, ctx.grid)
        for N in ctx.config.n_values:
            out.add(_row("boundary", item.label, idx, N, f_quasinorm(ctx.expectation(i, N), idx, ctx.grid), den))
    return out.result()


EXPERIMENT_ROWS: dict[str, Callable[[SweepContext, int], tuple[list[RatioRow], int]]] = {
    "en": _en_rows,
    "pn": _pn_rows,
    "enpn": _enpn_rows,
    "enb": _enb_rows,
    "tn": _tn_rows,
    "mult": _mult_rows,
    "boundary": _boundary_rows,
}

_WORKER_CONTEXT: Optional[SweepContext] = None


def _init_worker(config_json: str):
    global _WORKER_CONTEXT
    _WORKER_CONTEXT = SweepContext.build(ExperimentConfig.model_validate_json(config_json))


def _worker_rows(experiment: str, item: int) -> tuple[list[RatioRow], int]:
    return EXPERIMENT_ROWS[experiment](_WORKER_CONTEXT, item)


def run_sweep(
    experiment: str,
    config: ExperimentConfig,
    context: Optional[SweepContext] = None,
    jobs: Optional[int] = None,
) -> RatioReport:
    """Run one sweep over the whole corpus.

    Args:
        experiment: one of en, pn, enpn, enb, tn, mult, boundary
        config: run configuration
        context: prebuilt context to reuse across sweeps (serial runs only)
        jobs: worker processes (default config.jobs)

    Returns:
        RatioReport with rows in canonical order
    """
    if experiment not in EXPERIMENT_ROWS:
        raise ValueError(f"Unknown experiment: {experiment}")
    jobs = config.jobs if jobs is None else jobs
    report = RatioReport(experiment=experiment)

    if jobs > 1:
        n_items = sum(family.count for family in config.families)
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_worker,
            initargs=(config.model_dump_json(),),
        ) as executor:
            futures = [executor.submit(_worker_rows, experiment, i) for i in range(n_items)]
            for future in futures:
                report.extend(*future.result())
    else:
        ctx = context if context is not None else SweepContext.build(config)
        for i in range(len(ctx.corpus)):
            report.extend(*EXPERIMENT_ROWS[experiment](ctx, i))

    if report.skipped:
        logger.warning(f"{experiment}: skipped {report.skipped} rows with zero denominator")
    logger.info(f"{experiment}: {len(report.rows)} rows")
    return report.sorted()


def uniform_bound_sweep(config: ExperimentConfig, context: Optional[SweepContext] = None) -> RatioReport:
    """E_N in F^s_{p,q}: ratio of ||E_N f|| to ||f||."""
    return run_sweep("en", config, context)


def pn_bound_sweep(config: ExperimentConfig, context: Optional[SweepContext] = None) -> RatioReport:
    """P_N in F^s_{p,q}, computed by truncating the coefficients of f."""
    return run_sweep("pn", config, context)


def en_minus_pn_sweep(config: ExperimentConfig, context: Optional[SweepContext] = None) -> RatioReport:
    """||E_N f - P_N f|| in B^s_{p,r} against ||f|| in B^s_{p,inf}."""
    return run_sweep("enpn", config, context)


def besov_bound_sweep(config: ExperimentConfig, context: Optional[SweepContext] = None) -> RatioReport:
    """||E_N f|| in B^s_{p,r} against ||f|| in B^s_{p,inf}."""
    return run_sweep("enb", config, context)


def tn_bound_sweep(
    config: ExperimentConfig,
    a_family: Optional[str] = None,
    context: Optional[SweepContext] = None,
) -> RatioReport:
    """T_N[f, a] in B^s_{p,r} against ||f|| in B^s_{p,inf}, for one or all a families."""
    if a_family is not None:
        config = config.model_copy(update={"tn_families": [a_family]})
        if context is not None:
            context = context.with_config(config)
    return run_sweep("tn", config, context)


def multiplier_sweep(
    config: ExperimentConfig,
    b_family: Optional[str] = None,
    scale: Optional[str] = None,
    context: Optional[SweepContext] = None,
) -> RatioReport:
    """E_0 f + sum b_n D_n f against f, in F (or B) quasi-norms."""
    update = {}
    if b_family is not None:
        update["mult_families"] = [b_family]
    if scale is not None:
        update["mult_scales"] = [scale]
    if update:
        config = config.model_copy(update=update)
        if context is not None:
            context = context.with_config(config)
    return run_sweep("mult", config, context)


def boundary_sweep(config: ExperimentConfig, context: Optional[SweepContext] = None) -> RatioReport:
    """E_N in F^s_{p,q} with s stepped across the theorem-region edges."""
    return run_sweep("boundary", config, context)


SWEEPS = {
    "en": uniform_bound_sweep,
    "pn": pn_bound_sweep,
    "enpn": en_minus_pn_sweep,
    "enb": besov_bound_sweep,
    "tn": tn_bound_sweep,
    "mult": multiplier_sweep,
    "boundary": boundary_sweep,
}
