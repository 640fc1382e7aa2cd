"""Exit criteria. Each test is one criterion; the summary prints a line per test."""

import json
import time

import numpy as np
import pytest

from lelm_lab.apparatus import (
    compose,
    diagonal_rotation,
    haar_random,
    hadamard_lr,
    load_apparatus,
    projective_separate,
    uopt_n1,
)
from lelm_lab.bellcore import BellLabel, Statistics, bell_vector, enumerate_bell_labels, inner_product, reduced_density
from lelm_lab.detection import OutcomePair, detection_signature_vector, expected_click_rate, signature_table
from lelm_lab.partition import apparatus_partition, class_signature_report, partition_classes, two_copy_partition
from lelm_lab.search import CampaignConfig, bound_campaign

NS = (1, 2, 3)
STATS = tuple(Statistics)


def test_c01_optimal_one_copy_counts():
    start = time.perf_counter()
    counts = {n: apparatus_partition(hadamard_lr(n), "boson").class_count for n in NS}
    elapsed = time.perf_counter() - start
    assert counts == {1: 3, 2: 7, 3: 15}
    assert elapsed < 5.0


def test_c02_class_size_law():
    for n in NS:
        sizes = sorted(apparatus_partition(hadamard_lr(n), "boson").class_sizes, reverse=True)
        assert sizes == [2**n] + [2 ** (n - 1)] * (2 ** (n + 1) - 2)


def test_c03_fermion_parity():
    for n in NS:
        table = signature_table(hadamard_lr(n), "fermion")
        p = partition_classes(table)
        assert p.class_count == apparatus_partition(hadamard_lr(n), "boson").class_count
        phi_class = {BellLabel(t) for t in np.ndindex(*([2] * n))}
        big = next(c for c in class_signature_report(table, p) if set(c.members) == phi_class)
        assert big.owned == {OutcomePair(2 * s - 1, 2 * s) for s in range(1, 2**n + 1)}


def test_c04_separate_channel():
    for n in NS:
        p = apparatus_partition(projective_separate(n), "boson")
        assert p.class_sizes == [2**n] * 2**n


def test_c05_two_copy_completeness():
    for n in NS:
        start = time.perf_counter()
        diag = diagonal_rotation(n, range(n))
        for first in (hadamard_lr(n), projective_separate(n)):
            p = two_copy_partition(first, compose(first, diag), "boson")
            assert p.class_count == 4**n and p.is_complete()
        assert time.perf_counter() - start < 60.0


def test_c06_uniform_click_rate():
    for n in (1, 2):
        apps = [hadamard_lr(n), projective_separate(n)] + [haar_random(n, s) for s in range(20)]
        if n == 1:
            apps.append(uopt_n1())
        for app in apps:
            for stats in STATS:
                for B in enumerate_bell_labels(n):
                    for i in range(1, app.modes + 1):
                        assert abs(expected_click_rate(app, B, i, stats) - 2.0**-n) < 1e-9


def test_c07_bound_fuzzing():
    start = time.perf_counter()
    for stats in STATS:
        for n, trials in ((1, 500), (2, 200)):
            report = bound_campaign(CampaignConfig(n, stats, trials, 2024))
            assert report.violations == [] and report.max_observed <= 2 ** (n + 1) - 1
        report = bound_campaign(CampaignConfig(1, stats, 200, 2024, "separate-channel"))
        assert report.violations == [] and report.max_observed <= 2
    assert time.perf_counter() - start < 120.0


def test_c08_completeness_and_cross_oracle():
    for n in (1, 2):
        apps = [hadamard_lr(n), projective_separate(n), haar_random(n, 1), haar_random(n, 2)]
        if n == 1:
            apps.append(uopt_n1())
        for stats in STATS:
            consts = {True: set(), False: set()}
            for app in apps:
                table = signature_table(app, stats)
                assert np.max(np.abs(table.probabilities.sum(axis=1) - 1)) < 1e-9
                bells = [bell_vector(B) for B in table.labels]
                for k, out in enumerate(table.outcomes):
                    sig = detection_signature_vector(app, stats, out)
                    for B, bv in zip(table.labels, bells):
                        proj = inner_product(sig, bv)
                        amp = table.amplitudes[B.index, k]
                        assert (abs(proj) > 1e-9) == (abs(amp) > 1e-9)
                        if abs(proj) > 1e-6:
                            consts[out.i == out.j].add(np.round(amp / proj, 9))
            # one shared constant for i != j, one for i == j
            assert all(len(c) <= 1 for c in consts.values())


def test_c09_reduced_density_identity():
    for n in (1, 2):
        for stats in STATS:
            for B in enumerate_bell_labels(n):
                rho = reduced_density(B, stats)
                assert np.max(np.abs(rho - np.eye(2 ** (n + 1)) / 2 ** (n + 1))) < 1e-12


def test_c10_uopt_loaded(tmp_path):
    path = tmp_path / "uopt.json"
    signs = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]
    path.write_text(json.dumps({"n": 1, "matrix": [[[0.5 * x, 0.0] for x in row] for row in signs]}))
    app = load_apparatus(path)
    assert np.array_equal(app.U, uopt_n1().U)
    assert np.all(np.abs(app.U) == 0.5)
    p = apparatus_partition(app, "boson")
    phi_p, phi_m, psi_p, psi_m = enumerate_bell_labels(1)
    assert p.as_sets() == [{phi_p, psi_p}, {phi_m}, {psi_m}]
