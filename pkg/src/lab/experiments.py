"""
Experiment drivers: covertness, square-root law, throughput, dependent sources and the
flag-bit report. Each returns a pandas DataFrame with a fixed column order.
"""
import math
from typing import Dict, List, Optional

import pandas as pd
from tqdm import tqdm

from ..config.models import DetectorKind, Hypothesis
from ..dist.analytics import (
    chi_square_fit,
    covertness_lower_bound,
    expected_throughput,
    flag_bit_bound,
    flag_bit_kl,
    flag_scalar_check,
    kl_divergence,
    kl_limit,
    modified_pmf,
    scale_constant,
)
from ..dist.dependent import (
    DependentSizeModel,
    as_model,
    conditional_kl_profile,
    dependent_insertion_profile,
)
from ..dist.models import CovertnessBudget, SizePmf
from ..exceptions import ExperimentError
from ..scheme.budget import derive_budget
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from ..warden.detectors import chebyshev_false_alarm_bound
from ..warden.estimator import estimate_errors_many
from ..warden.interfaces import Detector
from ..warden.models import DetectorContext
from ..warden.registry import DetectorRegistry
from .models import (
    COVERTNESS_COLUMNS,
    DEPENDENT_COLUMNS,
    FLAG_COLUMNS,
    SQRT_LAW_COLUMNS,
    THROUGHPUT_COLUMNS,
    ExperimentSpec,
)
from .simulation import (
    DependentSource,
    IidSource,
    simulate_dependent_throughput,
    simulate_iid_throughput,
)

# Salt of the per-point random streams: (experiment, point index).
_COVERTNESS, _SQRT_LAW, _THROUGHPUT, _DEPENDENT = 1, 2, 3, 4


def _budget(model, n: int, epsilon: float, spec: ExperimentSpec) -> CovertnessBudget:
    """Covertness budget at eps, or the zero-selection control when eps is 0."""
    if epsilon == 0.0:
        if isinstance(model, DependentSizeModel):
            return CovertnessBudget.null(n)
        return CovertnessBudget.null(n, scale_constant(model))
    return derive_budget(model, n, epsilon, spec.eta_mode)


class ExperimentRunner:
    """
    Runs the lab experiments for one ExperimentSpec.
    """

    def __init__(self, spec: ExperimentSpec, registry: Optional[DetectorRegistry] = None,
                 logger: Optional[LoggerInterface] = None):
        """
        Initialize the runner.

        Args:
            spec: Experiment parameters
            registry: Detector registry (a default registry if omitted)
            logger: Logger instance
        """
        self._spec = spec
        self._logger = logger or LoggerFactory.create("lab.experiments")
        self._registry = registry or DetectorRegistry(logger=self._logger)

    @property
    def spec(self) -> ExperimentSpec:
        return self._spec

    def _pmf(self, experiment: str) -> SizePmf:
        if self._spec.is_dependent:
            raise ExperimentError(f"the {experiment} experiment needs an i.i.d. pmf", experiment=experiment)
        return self._spec.model

    def _detectors(self, context: DetectorContext, iid: bool) -> Dict[str, Detector]:
        detectors = {}
        for kind in self._spec.detectors:
            if iid and kind is DetectorKind.DEPENDENT_LRT:
                continue
            if not iid and kind in (DetectorKind.MEAN, DetectorKind.LRT):
                continue
            detectors[kind.value] = self._registry.create(kind.value, context)
        return detectors

    def _progress(self, items, desc: str):
        return tqdm(items, desc=desc, disable=not self._spec.progress)

    def covertness_sweep(self) -> pd.DataFrame:
        """
        Empirical P_e of every detector at p = eps / (xi sqrt(n)) for each (eps, n).

        Rows carry the analytic floor 1/2 - eps from the 2 eps^2 divergence budget,
        the exact total divergence n D(f~ || f) and its floor.
        """
        spec = self._spec
        pmf = self._pmf("covertness")
        rows = []
        points = [(e, n) for e in spec.epsilons for n in spec.sizes]
        for point, (epsilon, n) in enumerate(self._progress(points, "covertness")):
            budget = _budget(pmf, n, epsilon, spec)
            alternative = modified_pmf(pmf, budget.p)
            total_kl = n * kl_divergence(alternative, pmf)
            kl_budget = 2.0 * epsilon ** 2
            context = DetectorContext(n=n, pmf=pmf, alternative=alternative, p=budget.p,
                                      alpha=spec.alpha, seed=spec.seed)
            detectors = self._detectors(context, iid=True)
            salt = (_COVERTNESS, point)
            reports = estimate_errors_many(
                detectors,
                IidSource(pmf, n, Hypothesis.H0, salt=salt),
                IidSource(pmf, n, Hypothesis.H1, budget.p, salt=salt),
                spec.trials, spec.seed, workers=spec.workers, logger=self._logger,
            )
            bound = covertness_lower_bound(kl_budget)
            kl_floor = covertness_lower_bound(total_kl)
            for name, report in reports.items():
                rows.append({
                    'detector': name, 'n': n, 'epsilon': epsilon, 'gamma': math.nan,
                    'trials': report.trials, 'p_fa': report.p_fa, 'p_md': report.p_md,
                    'p_e': report.p_e, 'ci': report.ci_halfwidth,
                    'p': budget.p, 'total_kl': total_kl, 'kl_budget': kl_budget,
                    'kl_ok': total_kl <= kl_budget, 'bound': bound, 'kl_floor': kl_floor,
                    'floor_ok': report.p_e >= kl_floor - 2.0 * report.ci_halfwidth,
                })
            self._logger.info(f"covertness eps={epsilon} n={n}: n D={total_kl:.6g}, floor {bound:.4f}")
        return pd.DataFrame(rows, columns=COVERTNESS_COLUMNS)

    def sqrt_law_sweep(self) -> pd.DataFrame:
        """
        Detection when Alice inserts n^gamma bits on average.

        The selection probability is re-derived per point so that the expected insertion
        n p sum_x f(x) bits(x) equals n^gamma.

        Raises:
            ExperimentError: If a point needs p >= 1
        """
        spec = self._spec
        pmf = self._pmf("sqrt-law")
        per_selection = float((pmf.prob_array * pmf.size_map.gain_table).sum())
        if per_selection == 0.0:
            raise ExperimentError("the support leaves no room for insertion", experiment="sqrt-law")
        rows = []
        points = [(g, n) for g in spec.gammas for n in spec.sizes]
        for point, (gamma, n) in enumerate(self._progress(points, "sqrt-law")):
            target = float(n) ** gamma
            p = target / (n * per_selection)
            if p >= 1.0:
                raise ExperimentError(
                    f"n^gamma = {target:.6g} bits at n={n} needs selection probability {p:.4g} >= 1",
                    experiment="sqrt-law", n=n, gamma=gamma, p=p
                )
            alternative = modified_pmf(pmf, p)
            context = DetectorContext(n=n, pmf=pmf, alternative=alternative, p=p,
                                      alpha=spec.alpha, seed=spec.seed)
            detectors = self._detectors(context, iid=True)
            salt = (_SQRT_LAW, point)
            reports = estimate_errors_many(
                detectors,
                IidSource(pmf, n, Hypothesis.H0, salt=salt),
                IidSource(pmf, n, Hypothesis.H1, p, salt=salt),
                spec.trials, spec.seed, workers=spec.workers, logger=self._logger,
            )
            t = math.sqrt(pmf.variance / (spec.alpha * n))
            for name, report in reports.items():
                rows.append({
                    'detector': name, 'n': n, 'epsilon': math.nan, 'gamma': gamma,
                    'trials': report.trials, 'p_fa': report.p_fa, 'p_md': report.p_md,
                    'p_e': report.p_e, 'ci': report.ci_halfwidth,
                    'p': p, 'target_bits': target,
                    'chebyshev_bound': chebyshev_false_alarm_bound(pmf.variance, n, t),
                })
        return pd.DataFrame(rows, columns=SQRT_LAW_COLUMNS)

    def throughput_experiment(self) -> pd.DataFrame:
        """
        Distribution of n_c over trials against E[n_c] and the half-mean threshold.

        Each row also carries a chi-square p-value of one full-length inserted size
        sequence against f~.
        """
        spec = self._spec
        pmf = self._pmf("throughput")
        rows = []
        points = [(e, n) for e in spec.epsilons for n in spec.sizes]
        for point, (epsilon, n) in enumerate(self._progress(points, "throughput")):
            budget = _budget(pmf, n, epsilon, spec)
            estimate = expected_throughput(pmf, budget)
            salt = (_THROUGHPUT, point)
            counts = simulate_iid_throughput(pmf, n, budget.p, spec.trials, spec.seed, salt)
            mean = float(counts.mean())
            se = float(counts.std(ddof=1) / math.sqrt(spec.trials)) if spec.trials > 1 else 0.0
            sizes, _ = IidSource(pmf, n, Hypothesis.H1, budget.p, salt=salt).draw(spec.seed, spec.trials)
            _, pvalue = chi_square_fit(sizes, modified_pmf(pmf, budget.p))
            rows.append({
                'epsilon': epsilon, 'n': n, 'p': budget.p, 'trials': spec.trials,
                'mean_nc': mean, 'se_nc': se, 'expected_nc': estimate.expected_bits,
                'threshold': estimate.half_mean_threshold,
                'frac_above_threshold': float((counts > estimate.half_mean_threshold).mean()),
                'mean_within_3se': abs(mean - estimate.expected_bits) <= 3.0 * se,
                'size_law_pvalue': pvalue,
            })
            self._logger.info(f"throughput eps={epsilon} n={n}: mean n_c={mean:.3f}, "
                              f"E[n_c]={estimate.expected_bits:.3f}")
        return pd.DataFrame(rows, columns=THROUGHPUT_COLUMNS)

    def dependent_experiment(self) -> pd.DataFrame:
        """
        Monte Carlo n_c of the dependent scheme against p' c(n), p' c_room(n) and the exact
        E[n_c], plus the per-row divergence check max_h D(f~(.|h) || f(.|h)) <= 2 eps^2 / n.

        An i.i.d. pmf is run as its order-0 embedding. If the conditional likelihood-ratio
        detector is requested, its P_e is reported too.
        """
        spec = self._spec
        model = as_model(spec.model)
        rows = []
        points = [(e, n) for e in spec.epsilons for n in spec.sizes]
        for point, (epsilon, n) in enumerate(self._progress(points, "dependent")):
            budget = _budget(model, n, epsilon, spec)
            profile = dependent_insertion_profile(model, n)
            salt = (_DEPENDENT, point)
            counts = simulate_dependent_throughput(model, n, budget.p, spec.trials, spec.seed, salt)
            mean = float(counts.mean())
            se = float(counts.std(ddof=1) / math.sqrt(spec.trials)) if spec.trials > 1 else 0.0
            row_kls = conditional_kl_profile(model, budget.p, n)
            max_row_kl = max((r.kl for r in row_kls), default=0.0)
            row_budget = 2.0 * epsilon ** 2 / n
            p_e, ci = math.nan, math.nan
            if DetectorKind.DEPENDENT_LRT in spec.detectors:
                context = DetectorContext(n=n, model=model, p=budget.p, alpha=spec.alpha, seed=spec.seed)
                reports = estimate_errors_many(
                    self._detectors(context, iid=False),
                    DependentSource(model, n, Hypothesis.H0, salt=salt),
                    DependentSource(model, n, Hypothesis.H1, budget.p, salt=salt),
                    spec.trials, spec.seed, workers=spec.workers, logger=self._logger,
                )
                report = reports[DetectorKind.DEPENDENT_LRT.value]
                p_e, ci = report.p_e, report.ci_halfwidth
            rows.append({
                'epsilon': epsilon, 'n': n, 'p': budget.p, 'eta': budget.scale_constant,
                'eta_mode': spec.eta_mode.value, 'trials': spec.trials,
                'mean_nc': mean, 'se_nc': se,
                'c_n': profile.c, 'bound': budget.p * profile.c,
                'c_room': profile.c_room, 'room_bound': budget.p * profile.c_room,
                'expected_nc': budget.p * profile.bits_per_selection,
                'max_row_kl': max_row_kl, 'row_kl_budget': row_budget,
                'row_kl_ok': max_row_kl <= row_budget,
                'p_e': p_e, 'ci': ci,
            })
            if max_row_kl > row_budget:
                self._logger.warning(f"row divergence {max_row_kl:.6g} exceeds 2 eps^2/n = {row_budget:.6g} "
                                     f"at eps={epsilon} n={n} ({spec.eta_mode.value} eta)")
        return pd.DataFrame(rows, columns=DEPENDENT_COLUMNS)

    def flag_covertness_report(self) -> pd.DataFrame:
        """
        Analytic size and flag divergence terms n D(f~ || f) and n D(h~ || B_0.5) per (eps, n).

        Checked inequalities: the size term against 2 eps^2, the flag term against
        n (xi_0 p / (1 - p))^2, the large-n limit of their sum against 2 eps^2, and the
        scalar flag-bit inequality on a grid. `gap` is the distance of the sum from its limit.
        """
        spec = self._spec
        pmf = self._pmf("flag-report")
        scalar_ok = flag_scalar_check()
        rows = []
        for epsilon in spec.epsilons:
            size_limit, flag_limit = kl_limit(pmf, epsilon)
            limit = size_limit + flag_limit
            kl_budget = 2.0 * epsilon ** 2
            for n in spec.sizes:
                budget = _budget(pmf, n, epsilon, spec)
                p = budget.p
                size_term = n * kl_divergence(modified_pmf(pmf, p), pmf)
                flag_term = n * flag_bit_kl(pmf, p)
                flag_bound = n * flag_bit_bound(pmf, p)
                total = size_term + flag_term
                rows.append({
                    'epsilon': epsilon, 'n': n, 'p': p,
                    'size_term': size_term, 'flag_term': flag_term,
                    'flag_term_scheme': n * flag_bit_kl(pmf, p, law="scheme"),
                    'total': total, 'kl_budget': kl_budget, 'size_ok': size_term <= kl_budget,
                    'flag_bound': flag_bound, 'flag_ok': flag_term <= flag_bound,
                    'limit': limit, 'limit_ok': limit <= kl_budget,
                    'gap': abs(total - limit), 'scalar_ok': scalar_ok,
                })
        return pd.DataFrame(rows, columns=FLAG_COLUMNS)


def covertness_sweep(spec: ExperimentSpec, logger: Optional[LoggerInterface] = None) -> pd.DataFrame:
    return ExperimentRunner(spec, logger=logger).covertness_sweep()


def sqrt_law_sweep(spec: ExperimentSpec, logger: Optional[LoggerInterface] = None) -> pd.DataFrame:
    return ExperimentRunner(spec, logger=logger).sqrt_law_sweep()


def throughput_experiment(spec: ExperimentSpec, logger: Optional[LoggerInterface] = None) -> pd.DataFrame:
    return ExperimentRunner(spec, logger=logger).throughput_experiment()


def dependent_experiment(spec: ExperimentSpec, logger: Optional[LoggerInterface] = None) -> pd.DataFrame:
    return ExperimentRunner(spec, logger=logger).dependent_experiment()


def flag_covertness_report(pmf: SizePmf, epsilon: float, sizes: List[int],
                           logger: Optional[LoggerInterface] = None) -> pd.DataFrame:
    """Flag-bit report for one eps over several stream lengths."""
    spec = ExperimentSpec(model=pmf, epsilons=[epsilon], sizes=list(sizes))
    return ExperimentRunner(spec, logger=logger).flag_covertness_report()
