"""
Estimator Validation
Compares certified estimator intervals against closed forms, exact solvers and
Monte-Carlo runs, tabulates the outcome and writes a JSON report.
"""
import json
import sys
from pathlib import Path

import pandas as pd

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import RESULTS_DIR, VALIDATION_REPORT, VALIDATION_TABLE
from src.data.tree_generator import path_tree, random_labeled_tree, star_tree
from src.evaluation.closed_forms import closed_form_reference
from src.evaluation.exact_solver import exact_cover_return_small, exact_cover_time_small
from src.evaluation.monte_carlo import mc_cover_return
from src.extensions.cover_time import cover_time
from src.inference.estimator import cover_return_time


def _as_float(value):
    return float(value)


class ValidationEvaluator:
    """Runs estimator-vs-oracle comparisons and collects one row per case."""

    COLUMNS = ["case", "oracle", "measure", "n", "start", "reference", "lower",
               "estimate", "upper", "contains", "relative_gap", "trunc_n", "certified"]

    def __init__(self, epsilon=None, trunc_n=None, backend="auto"):
        self.epsilon = epsilon
        self.trunc_n = trunc_n
        self.backend = backend
        self.rows = []
        self.summary = None

    def _record(self, case, oracle, measure, tree, start, reference, report):
        reference = _as_float(reference)
        lower, upper = _as_float(report.lower), _as_float(report.upper)
        self.rows.append({
            "case": case,
            "oracle": oracle,
            "measure": measure,
            "n": tree.n,
            "start": start,
            "reference": reference,
            "lower": lower,
            "estimate": _as_float(report.estimate),
            "upper": upper,
            "contains": lower <= reference <= upper,
            "relative_gap": (upper - lower) / reference if reference else 0.0,
            "trunc_n": report.trunc_n,
            "certified": report.certified,
        })

    def _estimate(self, measure, tree, start):
        estimator = cover_return_time if measure == "cover-return" else cover_time
        return estimator(tree, start, epsilon=self.epsilon, trunc_n=self.trunc_n,
                         backend=self.backend)

    def evaluate_closed_forms(self, sizes=(3, 4, 5)):
        """Paths from an endpoint and stars from the center."""
        print("\nValidating against closed forms...")
        for n in sizes:
            for family, tree in (("path", path_tree(n)), ("star", star_tree(n))):
                start = tree.vertices[0]
                for measure in ("cover-return", "cover"):
                    reference = closed_form_reference(family, n, measure=measure)
                    report = self._estimate(measure, tree, start)
                    self._record(f"{family}-{n}", "closed-form", measure, tree, start,
                                 reference, report)
        print(f"✓ {len(self.rows)} closed-form cases")

    def evaluate_exact(self, count=10, max_n=6, seed=0):
        """Random labeled trees against the exact solvers, every start vertex."""
        print("\nValidating against the exact solver...")
        before = len(self.rows)
        for i in range(count):
            n = 2 + (seed + i) % (max_n - 1)
            tree = random_labeled_tree(n, seed + i)
            for start in tree.vertices:
                exact = exact_cover_return_small(tree, start).value
                self._record(f"random-{i}", "exact", "cover-return", tree, start, exact,
                             self._estimate("cover-return", tree, start))
                exact = exact_cover_time_small(tree, start).value
                self._record(f"random-{i}", "exact", "cover", tree, start, exact,
                             self._estimate("cover", tree, start))
        print(f"✓ {len(self.rows) - before} exact-solver cases")

    def evaluate_monte_carlo(self, count=2, n=12, samples=20_000, seed=7):
        """Estimator interval against a Monte-Carlo mean (4 standard errors)."""
        print("\nValidating against Monte-Carlo...")
        for i in range(count):
            tree = random_labeled_tree(n, seed + i)
            start = tree.vertices[0]
            mc = mc_cover_return(tree, start, samples, seed + i)
            report = self._estimate("cover-return", tree, start)
            slack = 4 * mc.standard_error
            self.rows.append({
                "case": f"mc-{i}", "oracle": "monte-carlo", "measure": "cover-return",
                "n": n, "start": start, "reference": mc.mean,
                "lower": _as_float(report.lower), "estimate": _as_float(report.estimate),
                "upper": _as_float(report.upper),
                "contains": _as_float(report.lower) - slack <= mc.mean <= _as_float(report.upper) + slack,
                "relative_gap": (_as_float(report.upper) - _as_float(report.lower)) / mc.mean,
                "trunc_n": report.trunc_n, "certified": report.certified,
            })
        print(f"✓ {count} Monte-Carlo cases")

    def results_table(self):
        """Rows as a DataFrame in column order."""
        return pd.DataFrame(self.rows, columns=self.COLUMNS)

    def summarize(self):
        """Coverage rate and worst relative gap per oracle and measure."""
        if not self.rows:
            raise ValueError("No validation rows. Call an evaluate_* method first.")
        table = self.results_table()
        grouped = table.groupby(["oracle", "measure"])
        summary = grouped.agg(
            cases=("case", "count"),
            coverage=("contains", "mean"),
            worst_gap=("relative_gap", "max"),
        ).reset_index()
        self.summary = summary

        print("\n" + "=" * 60)
        print("VALIDATION SUMMARY")
        print("=" * 60)
        print(f"  {'Oracle':<14s} {'Measure':<14s} {'Cases':>6s} {'Coverage':>10s} {'Worst gap':>12s}")
        print(f"  {'-' * 14} {'-' * 14} {'-' * 6} {'-' * 10} {'-' * 12}")
        for row in summary.itertuples(index=False):
            print(f"  {row.oracle:<14s} {row.measure:<14s} {row.cases:>6d} "
                  f"{row.coverage * 100:>9.1f}% {row.worst_gap:>12.3e}")
        print("=" * 60)
        return summary

    def save_validation_report(self, save_path=None, table_path=None):
        """
        Save the summary and every row to JSON, and the rows to CSV.

        Args:
            save_path: JSON path (default: VALIDATION_REPORT)
            table_path: CSV path (default: VALIDATION_TABLE)
        """
        if self.summary is None:
            raise ValueError("Summary not computed. Call summarize() first.")
        save_path = VALIDATION_REPORT if save_path is None else Path(save_path)
        table_path = VALIDATION_TABLE if table_path is None else Path(table_path)
        save_path.parent.mkdir(parents=True, exist_ok=True)

        report = {
            "summary": self.summary.to_dict(orient="records"),
            "cases": self.results_table().to_dict(orient="records"),
            "settings": {
                "epsilon": None if self.epsilon is None else str(self.epsilon),
                "trunc_n": self.trunc_n,
                "backend": self.backend,
            },
        }
        with open(save_path, "w") as f:
            json.dump(report, f, indent=2, default=str)
        self.results_table().to_csv(table_path, index=False)
        print(f"\n✓ Validation report saved to {save_path}")
        return save_path


def main():
    """Small validation run with a fixed truncation length."""
    RESULTS_DIR.mkdir(parents=True, exist_ok=True)
    evaluator = ValidationEvaluator(trunc_n=48, backend="rational")
    evaluator.evaluate_closed_forms(sizes=(3, 4))
    evaluator.evaluate_exact(count=4, max_n=5)
    evaluator.summarize()
    evaluator.save_validation_report()
    return evaluator


if __name__ == "__main__":
    evaluator = main()
