"""Acceptance gates. Each test prints one PASS/FAIL line; run with ``pytest -s`` to see them."""
import time

import numpy as np
import pytest

from conftest import DATA, GOLDEN, all_consistent, random_context
from mixedfca.cli import main
from mixedfca.implications import MixedImplication, entails, holds, models
from mixedfca.mining import (
    brute_force_concepts,
    build_lattice,
    closure_budget,
    mine_implications_and_concepts,
)
from mixedfca.experiments import ExperimentConfig, run_experiment
from mixedfca.tuner import binarize, compute_intervals, select_control_group, tune


def report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    assert ok, detail


def test_alloys_golden(alloys):
    up = alloys.derive_up(["o1", "o2"])
    derive_text = ", ".join(a for a in alloys.attributes if a in up) + "\n"
    mixed_text = alloys.format(alloys.mixed_up(["o1", "o2"])) + "\n"
    best = float("inf")
    for _ in range(50):
        t0 = time.perf_counter()
        alloys.derive_up(["o1", "o2"])
        alloys.mixed_up(["o1", "o2"])
        best = min(best, time.perf_counter() - t0)
    ok = (
        derive_text == (GOLDEN / "alloys_derive_up.txt").read_text()
        and mixed_text == (GOLDEN / "alloys_mixed_up.txt").read_text()
        and best < 1e-3
    )
    report("alloys-golden", ok, f"{derive_text.strip()!r} | {mixed_text.strip()!r} | {best * 1e6:.1f} us")


def test_galois_connection():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    violations = 0
    for _ in range(100):
        ctx = random_context(rng, 5, 5)
        bs = list(all_consistent(ctx.n_attributes))
        for a in range(ctx.all_objects + 1):
            up = ctx.mixed_up_mask(a)
            for b in bs:
                left = a & ~ctx.mixed_down_mask(b) == 0
                violations += left != (b <= up)
    elapsed = time.perf_counter() - t0
    report("galois-connection", violations == 0 and elapsed < 10, f"{violations} violations, {elapsed:.2f} s")


def test_oracle_equivalence_and_budget():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    mismatches = unsound = over_budget = 0
    for _ in range(200):
        ctx = random_context(rng, 6, 6)
        result = mine_implications_and_concepts(ctx)
        lattice = build_lattice(ctx, result.intents)
        got = [(c.extent, c.intent) for c in lattice.concepts]
        mismatches += got != [(c.extent, c.intent) for c in brute_force_concepts(ctx)]
        unsound += sum(not holds(ctx, phi) for phi in result.sigma)
        over_budget += result.closure_evaluations > closure_budget(ctx.n_attributes, ctx.n_objects)
    elapsed = time.perf_counter() - t0
    report(
        "oracle-equivalence",
        mismatches == 0 and unsound == 0 and elapsed < 60,
        f"{mismatches} concept mismatches, {unsound} unsound rules, {elapsed:.2f} s",
    )
    report("closure-budget", over_budget == 0, f"{over_budget} contexts over budget")


def test_completeness():
    rng = np.random.default_rng(3)
    failures = 0
    for _ in range(50):
        ctx = random_context(rng, 6, 6)
        sigma = mine_implications_and_concepts(ctx).sigma
        ms = models(sigma, ctx.n_attributes)
        for a in all_consistent(ctx.n_attributes):
            phi = MixedImplication(a, ctx.mixed_closure(a) - a)
            if holds(ctx, phi) and not entails(sigma, phi, ctx.n_attributes, ms):
                failures += 1
    report("completeness", failures == 0, f"{failures} failures")


def test_reference_tuning_path(small_problem):
    p = small_problem
    objectives = p.initial_objectives()
    gk = select_control_group(objectives, p.optimal, p.k)
    iv = compute_intervals(p.table, gk)
    outside = [i for i in range(len(p.row_names)) if i not in gk]
    ctx = binarize(p.table[outside], iv, [p.row_names[i] for i in outside], p.attributes)
    expected_ctx = (DATA / "small_outside.csv").read_text().splitlines()[1:]
    got_ctx = [",".join([name] + [str(int(v)) for v in row]) for name, row in zip(ctx.objects, ctx.incidence)]
    rep = tune(p)
    first = rep.trace[0]
    changes = {c["row"]: c for c in first.changes}
    after = [changes[r]["objective_after"] for r in ("c1", "c2", "c4")] if len(changes) == 3 else []
    adopted = all(
        changes[r]["after"][1] == 8.5 and changes[r]["after"][4] == 0.5 for r in changes
    )
    checks = {
        "G_k": [p.row_names[i] for i in gk] == ["c3", "c5"],
        "intervals": iv.as_list() == [[2, 6], [5, 7], [4, 7], [3, 4], [1, 2]],
        "table3": got_ctx == expected_ctx,
        "N": first.changed_attributes == ["b", "e"],
        "adopted": adopted and sorted(changes) == ["c1", "c2", "c4"],
        "objectives": len(after) == 3 and np.allclose(after, [17.25, 18.25, 36.25], rtol=0, atol=1e-9),
        "next G_k": len(rep.trace) > 1 and rep.trace[1].control_group == ["c3", "c4"],
        "final": rep.final_distance < rep.initial_distance == 68 and rep.final_distance <= 68 * 0.1,
    }
    bad = [k for k, v in checks.items() if not v]
    report(
        "reference-tuning-path",
        not bad,
        f"final distance {rep.final_distance:g} after {rep.iterations} iterations" + (f", failed {bad}" if bad else ""),
    )


def test_exp2_band():
    t0 = time.perf_counter()
    row = run_experiment(ExperimentConfig("exp2", k=3, n_configs=5, trials=10, base_seed=0))
    elapsed = time.perf_counter() - t0
    ok = row.mean_final_distance < 5 and row.mean_percent_reduction < 15 and elapsed < 300
    report(
        "exp2-band",
        ok,
        f"mean final {row.mean_final_distance:.3f}, mean %reduc {row.mean_percent_reduction:.3f}, {elapsed:.1f} s",
    )


def test_exp1_band():
    t0 = time.perf_counter()
    row = run_experiment(ExperimentConfig("exp1", k=2, n_configs=5, target=27900, trials=10, base_seed=0))
    elapsed = time.perf_counter() - t0
    ok = row.mean_final_distance < 0.02 * row.mean_initial_distance and elapsed < 600
    report(
        "exp1-band",
        ok,
        f"mean final {row.mean_final_distance:.3f} / mean initial {row.mean_initial_distance:.2f}, {elapsed:.1f} s",
    )


COMMANDS = {
    "mine": ["mine", "--input", str(DATA / "alloys.csv"), "--format", "json"],
    "lattice": ["lattice", "--input", str(DATA / "alloys.csv")],
    "tune": ["tune", "--input", str(DATA / "small_problem.json")],
    "experiment": ["experiment", "exp2", "--k", "2", "3", "--g", "5", "10", "--trials", "2", "--seed", "4"],
}


def test_cli_determinism(tmp_path, capsys):
    differing = []
    for name, argv in COMMANDS.items():
        blobs = []
        for run in range(2):
            out = tmp_path / f"{name}{run}.out"
            extra = ["--tsv-output", str(tmp_path / f"{name}{run}.tsv")] if name == "tune" else []
            assert main(argv + ["--output", str(out)] + extra) == 0
            blobs.append(out.read_bytes() + b"".join(p.read_bytes() for p in tmp_path.glob(f"{name}{run}.tsv")))
        if blobs[0] != blobs[1]:
            differing.append(name)
    report("cli-determinism", not differing, f"differing: {differing}" if differing else "all subcommands identical")
