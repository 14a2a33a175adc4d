"""
End-to-End Validation Pipeline
Runs the estimator on reference trees and checks every interval against the oracles.
"""
import sys
from pathlib import Path
sys.path.append(str(Path(__file__).resolve().parent.parent))

import argparse
import time

from config.config import RESULTS_DIR, configure_logging
from src.data.tree_generator import random_labeled_tree
from src.evaluation.evaluator import ValidationEvaluator
from src.evaluation.exact_solver import exact_last_vertex_small
from src.extensions.last_vertex import last_vertex_distribution


def parse_args():
    parser = argparse.ArgumentParser(description="Validate certified cover-time estimates.")
    parser.add_argument("--trunc-n", type=int, default=48, help="profile length for every case")
    parser.add_argument("--samples", type=int, default=20_000, help="Monte-Carlo episodes per case")
    parser.add_argument("--skip-mc", action="store_true", help="skip the Monte-Carlo step")
    parser.add_argument("--log-level", default=None)
    return parser.parse_args()


def main():
    """Execute the validation pipeline."""
    args = parse_args()
    configure_logging(args.log_level)

    print("=" * 80)
    print(" " * 22 + "TREE COVER-TIME VALIDATION PIPELINE")
    print("=" * 80)

    total_start_time = time.time()
    evaluator = ValidationEvaluator(trunc_n=args.trunc_n, backend="rational")

    # Step 1: Closed forms
    print("\n[STEP 1/4] Paths and stars with known cover times...")
    print("-" * 80)
    evaluator.evaluate_closed_forms(sizes=(3, 4, 5))

    # Step 2: Exact solver
    print("\n[STEP 2/4] Random trees against the exact solver...")
    print("-" * 80)
    evaluator.evaluate_exact(count=6, max_n=6)

    # Step 3: Last-vertex distribution
    print("\n[STEP 3/4] Last-vertex distribution...")
    print("-" * 80)
    worst = 0.0
    for seed in range(4):
        tree = random_labeled_tree(5, seed)
        start = tree.vertices[0]
        exact = exact_last_vertex_small(tree, start)
        result = last_vertex_distribution(tree, start, N=args.trunc_n)
        for label, probability in result.probabilities.items():
            worst = max(worst, abs(float(probability) - float(exact[label])))
    print(f"✓ Largest last-vertex deviation: {worst:.3e}")

    # Step 4: Monte-Carlo
    print("\n[STEP 4/4] Monte-Carlo cross-check...")
    print("-" * 80)
    if args.skip_mc:
        print("Skipped (--skip-mc)")
    else:
        evaluator.evaluate_monte_carlo(count=2, n=10, samples=args.samples)

    evaluator.summarize()
    RESULTS_DIR.mkdir(parents=True, exist_ok=True)
    evaluator.save_validation_report()

    total_time = time.time() - total_start_time
    print("\n" + "=" * 80)
    print(" " * 25 + "VALIDATION COMPLETED")
    print("=" * 80)
    print(f"\nTotal execution time: {total_time:.2f} seconds")
    print(f"Reports saved in: {RESULTS_DIR}")


if __name__ == "__main__":
    main()
