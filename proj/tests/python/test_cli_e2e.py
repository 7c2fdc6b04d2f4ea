#!/usr/bin/env python3
"""End-to-end tests of the distdicho CLI binary (path in argv[1])."""

import json
import os
import subprocess
import sys
import tempfile


def run(cli, *args, expect=0):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{args}: exit {proc.returncode}, expected {expect}\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}")
    return proc


def main():
    cli = sys.argv[1]

    # dichoi, text: the classic equal-variance table.
    out = run(cli, "dichoi", "--n1", "483", "--m1", "3266.965", "--s1", "437.7330",
              "--n2", "975", "--m2", "3452.728", "--s2", "436.4585",
              "--cp", "2500").stdout
    assert "t-Test" in out
    assert "Distributional method" in out
    assert "Diff. prop 0.0249819" in out
    assert "below the cut-point 2500" in out
    print("ok   dichoi text output")

    # Same comparison as JSON.
    out = run(cli, "dichoi", "--n1", "483", "--m1", "3266.965", "--s1", "437.7330",
              "--n2", "975", "--m2", "3452.728", "--s2", "436.4585",
              "--cp", "2500", "--format", "json").stdout
    payload = json.loads(out)
    assert abs(payload["comparison"]["effects"]["diff"]["est"] - 0.02498197) < 1e-6
    assert payload["comparison"]["assumption"]["kind"] == "equal"
    assert abs(payload["t_test"]["t"] + 7.6418) < 1e-3
    print("ok   dichoi json output")

    # dicho on a generated CSV agrees with dichoi on its summaries.
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = os.path.join(tmp, "data.csv")
        import random
        rng = random.Random(7)
        exposed = [rng.gauss(24.0, 4.0) for _ in range(90)]
        control = [rng.gauss(25.5, 4.0) for _ in range(110)]
        with open(csv_path, "w") as fh:
            fh.write("bmi,grp\n")
            for v in exposed:
                fh.write(f"{v!r},exposed\n")
            for v in control:
                fh.write(f"{v!r},control\n")

        def stats(xs):
            n = len(xs)
            mean = sum(xs) / n
            var = sum((v - mean) ** 2 for v in xs) / (n - 1)
            return mean, var ** 0.5

        m1, s1 = stats(exposed)
        m2, s2 = stats(control)
        a = run(cli, "dicho", "--data", csv_path, "--outcome", "bmi", "--group", "grp",
                "--exposed", "exposed", "--cp", "20").stdout
        b = run(cli, "dichoi", "--n1", "90", "--m1", repr(m1), "--s1", repr(s1),
                "--n2", "110", "--m2", repr(m2), "--s2", repr(s2), "--cp", "20").stdout
        assert a == b, "dicho and dichoi disagree on identical inputs"
        print("ok   dicho == dichoi")

        # regdicho from a summary file (random-intercept example).
        summary_path = os.path.join(tmp, "summary.json")
        with open(summary_path, "w") as fh:
            json.dump({
                "marginal_means": {"0": 3291.335, "1": 3125.941, "2": 3163.117},
                "residual_sd": 36.76134,
                "random_intercept_sd": 420.2496,
                "level_counts": {"0": 1287, "1": 631, "2": 188},
                "reference_level": "0",
            }, fh)
        out = run(cli, "regdicho", "--summary", summary_path, "--cp", "2500").stdout
        assert "[[1]]" in out and "[[2]]" in out
        assert "Diff. prop 0.0385950" in out
        print("ok   regdicho summary mode")

        # simulate: deterministic across --jobs.
        scenario_path = os.path.join(tmp, "scenario.json")
        with open(scenario_path, "w") as fh:
            json.dump({
                "distribution": {"model": "gamma", "shape": 2.0,
                                 "exposed": {"mean": 1.0}, "control": {"mean": 1.3}},
                "n_exposed": 100, "n_control": 100,
                "cut_point": 0.5, "reps": 250, "seed": 321,
            }, fh)
        r1 = run(cli, "simulate", "--scenario", scenario_path, "--jobs", "1").stdout
        r4 = run(cli, "simulate", "--scenario", scenario_path, "--jobs", "4").stdout
        assert r1 == r4, "simulate output varies with --jobs"
        report = json.loads(r1)
        assert report["failures"] == 0
        assert set(report["coverage"]) == {"diff", "rr", "or"}
        print("ok   simulate determinism")

    # Exit codes: usage errors 2, computation errors 1.
    run(cli, "dichoi", "--n1", "10", expect=2)
    run(cli, "bogus", expect=2)
    run(cli, "dichoi", "--n1", "100", "--m1", "0", "--s1", "1",
        "--n2", "100", "--m2", "0", "--s2", "1", "--cp", "-50", expect=1)
    run(cli, "--help", expect=0)
    print("ok   exit codes")

    print("all cli e2e tests passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
