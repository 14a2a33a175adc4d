"""
Validation runs against closed forms and the exact solver.
"""
import json

import pytest

from src.evaluation.evaluator import ValidationEvaluator


def test_small_validation_run(tmp_path):
    evaluator = ValidationEvaluator(trunc_n=32, backend="rational")
    evaluator.evaluate_closed_forms(sizes=(3,))
    evaluator.evaluate_exact(count=2, max_n=4, seed=1)
    table = evaluator.results_table()
    assert list(table.columns) == ValidationEvaluator.COLUMNS
    assert table["contains"].all()

    summary = evaluator.summarize()
    assert set(summary["oracle"]) == {"closed-form", "exact"}
    assert (summary["coverage"] == 1.0).all()

    report_path = evaluator.save_validation_report(tmp_path / "report.json", tmp_path / "rows.csv")
    report = json.loads(report_path.read_text())
    assert report["settings"] == {"epsilon": None, "trunc_n": 32, "backend": "rational"}
    assert len(report["cases"]) == len(table)
    assert (tmp_path / "rows.csv").exists()


def test_summary_and_save_need_rows():
    evaluator = ValidationEvaluator(trunc_n=8)
    with pytest.raises(ValueError, match="evaluate_"):
        evaluator.summarize()
    with pytest.raises(ValueError, match="summarize"):
        evaluator.save_validation_report()
