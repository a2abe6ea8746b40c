import logging
from dataclasses import dataclass

from neurashed.config import Settings
from neurashed.experiments.models import Scenario
from neurashed.experiments.studies import (
    run_batch_comparison,
    run_convergence,
    run_elasticity_study,
    run_info_bottleneck,
)
from neurashed.graph.firing import feature_pathway
from neurashed.reporting.tables import Cell

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpectationResult:
    name: str
    passed: bool
    detail: str


def _check_pathways(scenario: Scenario) -> list[ExpectationResult]:
    results = []
    for index, expected in sorted(scenario.expectations.pathways.items()):
        pattern = scenario.dataset.patterns[index]
        got = feature_pathway(graph=scenario.graph, pattern=pattern).nodes
        results.append(
            ExpectationResult(
                name=f"pathway[{index}]",
                passed=got == frozenset(expected),
                detail=f"got {sorted(got)}, declared {sorted(expected)}",
            )
        )
    return results


def _check_convergence(scenario: Scenario) -> list[ExpectationResult]:
    claim = scenario.expectations.convergence
    if claim is None:
        return []
    table = run_convergence(scenario, seeds=claim.seeds)
    return [
        ExpectationResult(
            name=f"convergence[seed={seed}]",
            passed=min_p >= claim.min_probability,
            detail=f"min p_label {min_p:.6f} (need >= {claim.min_probability})",
        )
        for seed, min_p, _ in table.rows  # type: ignore[misc]
    ]


def _in_range(value: float, bounds: tuple[float, float]) -> bool:
    return bounds[0] <= value <= bounds[1]


def peak_after(records: list[dict[str, Cell]], *, after: int | None) -> float | None:
    """Largest ``mi_input_bits`` among evaluations later than ``after``."""
    values = [
        float(r["mi_input_bits"])  # type: ignore[arg-type]
        for r in records
        if after is None or int(r["iteration"]) > after  # type: ignore[call-overload]
    ]
    return max(values) if values else None


def _check_info_bottleneck(scenario: Scenario, settings: Settings) -> list[ExpectationResult]:
    claim = scenario.expectations.information_bottleneck
    if claim is None:
        return []
    table = run_info_bottleneck(
        scenario,
        eval_every=settings.eval_every,
        sigma=settings.sigma,
        mc_samples=settings.mc_samples,
        seed=claim.seed,
    )
    results = []
    for level_claim in claim.levels:
        curve = [r for r in table.records() if r["level"] == level_claim.level]
        mi_input = [float(r["mi_input_bits"]) for r in curve]  # type: ignore[arg-type]
        mi_label = [float(r["mi_label_bits"]) for r in curve]  # type: ignore[arg-type]
        tag = f"information_bottleneck[level={level_claim.level}]"
        if level_claim.peak_mi_input_min is not None:
            after = level_claim.peak_after_iteration
            window = "" if after is None else f" after iteration {after}"
            peak = peak_after(curve, after=after)
            results.append(
                ExpectationResult(
                    name=f"{tag}.peak_mi_input",
                    passed=peak is not None and peak >= level_claim.peak_mi_input_min,
                    detail=f"peak {peak:.4f} bits{window}" if peak is not None else f"no evaluation{window}",
                )
            )
        if level_claim.final_mi_input is not None:
            results.append(
                ExpectationResult(
                    name=f"{tag}.final_mi_input",
                    passed=_in_range(mi_input[-1], level_claim.final_mi_input),
                    detail=f"final {mi_input[-1]:.4f} bits, range {level_claim.final_mi_input}",
                )
            )
        if level_claim.final_mi_label is not None:
            results.append(
                ExpectationResult(
                    name=f"{tag}.final_mi_label",
                    passed=_in_range(mi_label[-1], level_claim.final_mi_label),
                    detail=f"final {mi_label[-1]:.4f} bits, range {level_claim.final_mi_label}",
                )
            )
    return results


def _check_elasticity(scenario: Scenario) -> list[ExpectationResult]:
    claim = scenario.expectations.elasticity
    if claim is None:
        return []
    results = []
    for seed in claim.seeds:
        report = run_elasticity_study(
            scenario, train_iterations=scenario.config.iterations, seed=seed
        )
        medians = [
            report.median(base_group=claim.base_group, test_group=g) for g in claim.descending
        ]
        ordered = all(m is not None for m in medians) and all(
            a > b for a, b in zip(medians, medians[1:])  # type: ignore[operator]
        )
        results.append(
            ExpectationResult(
                name=f"elasticity_order[seed={seed}]",
                passed=ordered,
                detail=", ".join(f"{g}={m}" for g, m in zip(claim.descending, medians, strict=True)),
            )
        )
        self_values = [v for b, t, v, _ in report.rows.rows if b == t]
        results.append(
            ExpectationResult(
                name=f"elasticity_self[seed={seed}]",
                passed=all(v == 1.0 for v in self_values),
                detail=f"LE(x, x) values {self_values}",
            )
        )
    return results


def _check_batch_comparison(scenario: Scenario, settings: Settings) -> list[ExpectationResult]:
    claim = scenario.expectations.batch_comparison
    if claim is None:
        return []
    comparison = run_batch_comparison(
        scenario,
        small_batch=claim.small_batch,
        large_batch=claim.large_batch,
        seeds=claim.seeds,
        workers=settings.workers,
    )
    entropy = {(b, s, g): e for b, s, g, e in comparison.runs.rows}
    results = []
    for seed in claim.seeds:
        for group in scenario.node_groups:
            small = entropy[(claim.small_batch, seed, group)]
            large = entropy[(claim.large_batch, seed, group)]
            results.append(
                ExpectationResult(
                    name=f"sparser_small_batch[seed={seed}, group={group}]",
                    passed=small < large,  # type: ignore[operator]
                    detail=f"batch {claim.small_batch}: {small}, batch {claim.large_batch}: {large}",
                )
            )
    return results


def check_expectations(
    scenario: Scenario, *, settings: Settings | None = None
) -> list[ExpectationResult]:
    """Run every claim declared in the scenario's expectations."""
    settings = settings or Settings()
    results = (
        _check_pathways(scenario)
        + _check_convergence(scenario)
        + _check_info_bottleneck(scenario, settings)
        + _check_elasticity(scenario)
        + _check_batch_comparison(scenario, settings)
    )
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning(f"Scenario {scenario.name}: {len(failed)} expectation(s) failed: {failed}")
    else:
        logger.info(f"Scenario {scenario.name}: all {len(results)} expectations passed")
    return results
