import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import fock_oracle
from conftest import reference_apparatuses
from lelm_lab.apparatus import (
    Apparatus,
    haar_random,
    haar_separate,
    hadamard_lr,
    phase_shifted,
    projective_separate,
    uopt_n1,
)
from lelm_lab.bellcore import BellLabel, Statistics, bell_vector, enumerate_bell_labels, inner_product
from lelm_lab.detection import (
    OutcomePair,
    all_outcomes,
    detection_signature_vector,
    expected_click_rate,
    outcome_amplitude,
    outcome_column,
    outcome_probability,
    signature_support,
    signature_table,
)

PHI_P, PHI_M, PSI_P, PSI_M = (BellLabel((t,)) for t in range(4))
R = 1 / np.sqrt(2)
seeds = st.integers(0, 2**32)


def test_outcome_pair_canonical():
    assert OutcomePair.of(3, 1) == (1, 3)
    outs = all_outcomes(4)
    assert len(outs) == 10
    assert [outcome_column(o, 4) for o in outs] == list(range(10))


# Frozen values; each cross-checked against fock_oracle in the tests below.
def test_amplitude_examples():
    H = hadamard_lr(1)
    assert outcome_amplitude(H, "boson", PHI_P, (1, 1)) == pytest.approx(R, abs=1e-15)
    assert abs(outcome_amplitude(H, "boson", PSI_P, (1, 4))) < 1e-15
    assert outcome_probability(H, "boson", PHI_P, (1, 1)) == pytest.approx(0.25, abs=1e-15)
    assert outcome_probability(H, "boson", PSI_P, (1, 3)) == pytest.approx(0.5, abs=1e-15)


def test_examples_match_oracle():
    U = hadamard_lr(1).U
    assert fock_oracle.amplitude(U, (0,), 0, 0, False) == pytest.approx(R)
    assert abs(fock_oracle.amplitude(U, (2,), 0, 3, False)) < 1e-15
    assert fock_oracle.probability(U, (0,), 0, 0, False) == pytest.approx(0.25)
    assert fock_oracle.probability(U, (2,), 0, 2, False) == pytest.approx(0.5)


@pytest.mark.parametrize("n", [1, 2])
def test_amplitudes_match_fock_oracle(n, stats):
    fermion = stats is Statistics.FERMION
    for app in reference_apparatuses(n):
        table = signature_table(app, stats)
        for B in enumerate_bell_labels(n):
            for k, out in enumerate(table.outcomes):
                ref = fock_oracle.amplitude(app.U, B.tokens, out.i - 1, out.j - 1, fermion)
                assert abs(outcome_amplitude(app, stats, B, out) - ref) < 1e-12
                assert abs(table.amplitudes[B.index, k] - ref) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_probabilities_match_fock_oracle(n, stats):
    fermion = stats is Statistics.FERMION
    app = haar_random(n, 17)
    table = signature_table(app, stats)
    for B in enumerate_bell_labels(n):
        for k, out in enumerate(table.outcomes):
            ref = fock_oracle.probability(app.U, B.tokens, out.i - 1, out.j - 1, fermion)
            assert table.probabilities[B.index, k] == pytest.approx(ref, abs=1e-12)


def test_fermion_diagonal_zero():
    for app in reference_apparatuses(1):
        for B in enumerate_bell_labels(1):
            for i in range(1, 5):
                assert outcome_amplitude(app, "fermion", B, (i, i)) == 0
        table = signature_table(app, "fermion")
        diag = [outcome_column(OutcomePair(i, i), 4) for i in range(1, 5)]
        assert np.all(table.amplitudes[:, diag] == 0)
        assert all(o.i != o.j for _, o, _, _ in table.rows())


def test_support_examples():
    H = hadamard_lr(1)
    assert signature_support(H, "boson", PSI_M) == {(1, 4), (2, 3)}
    assert signature_support(H, "boson", PHI_M) == {(1, 1), (2, 2), (3, 3), (4, 4)}
    assert signature_support(projective_separate(1), "boson", PHI_P) == {(1, 2), (3, 4)}
    with pytest.raises(ValueError):
        signature_support(H, "boson", PHI_P, eps=0)


def test_signature_table_hadamard():
    table = signature_table(hadamard_lr(1), "boson")
    assert len(table.labels) == 4
    assert table.support(PSI_P) == {(1, 3), (2, 4)}
    assert table.support(PHI_P) == {(1, 1), (2, 2), (3, 3), (4, 4)}


@given(st.integers(1, 2), seeds, st.sampled_from(list(Statistics)))
@settings(max_examples=30, deadline=None)
def test_completeness_and_nonempty_support(n, seed, stats):
    for app in (haar_random(n, seed), haar_separate(n, seed)):
        table = signature_table(app, stats)
        assert np.max(np.abs(table.probabilities.sum(axis=1) - 1)) < 1e-9
        assert table.support_mask.any(axis=1).all()


@given(st.integers(1, 2), seeds, st.sampled_from(list(Statistics)))
@settings(max_examples=20, deadline=None)
def test_uniform_click_rate(n, seed, stats):
    app = haar_random(n, seed)
    for B in enumerate_bell_labels(n):
        rates = [expected_click_rate(app, B, i, stats) for i in range(1, app.modes + 1)]
        assert np.max(np.abs(np.array(rates) - 2.0**-n)) < 1e-9
        assert sum(rates) == pytest.approx(2.0, abs=1e-9)


def test_click_rate_examples():
    assert expected_click_rate(hadamard_lr(1), PHI_P, 1) == pytest.approx(0.5, abs=1e-12)
    app = haar_random(2, 7)
    for B in enumerate_bell_labels(2):
        for i in range(1, 9):
            assert expected_click_rate(app, B, i) == pytest.approx(0.25, abs=1e-9)
            ref = fock_oracle.click_rate(app.U, B.tokens, i - 1, False)
            assert ref == pytest.approx(0.25, abs=1e-9)


def test_signature_vector_example():
    # u1 = (|0L> + |0R>)/sqrt2, u2 = (|0L> - |0R>)/sqrt2; coefficient on |0L>|0R>
    # is u1[0L] u2[0R] +- u2[0L] u1[0R] = -1/2 +- 1/2
    app = hadamard_lr(1)
    boson = detection_signature_vector(app, "boson", (1, 2))
    assert np.all(np.abs(boson.amplitudes) < 1e-15)
    fermion = detection_signature_vector(app, "fermion", (1, 2))
    assert np.allclose(fermion.amplitudes, [-1, 0, 0, 0], atol=1e-15)
    # |1>|1> for bosons: sqrt2 * u1[0L] u1[0R]
    double = detection_signature_vector(app, "boson", (1, 1))
    assert np.allclose(double.amplitudes, [R, 0, 0, 0], atol=1e-15)


def test_signature_vector_same_channel_zero():
    app = projective_separate(2)
    # modes 1 and 3 are both left-channel
    assert np.all(detection_signature_vector(app, "boson", (1, 3)).amplitudes == 0)
    assert np.any(detection_signature_vector(app, "boson", (1, 4)).amplitudes != 0)


def fit_constant(xs, ys):
    xs, ys = np.asarray(xs), np.asarray(ys)
    keep = np.abs(xs) > 1e-6
    return np.sum(ys[keep] * np.conj(xs[keep])) / np.sum(np.abs(xs[keep]) ** 2)


@pytest.mark.parametrize("n", [1, 2])
def test_cross_oracle(n, stats):
    for app in reference_apparatuses(n):
        table = signature_table(app, stats)
        bells = [bell_vector(B) for B in table.labels]
        groups = {True: ([], []), False: ([], [])}
        for k, out in enumerate(table.outcomes):
            sig = detection_signature_vector(app, stats, out)
            for B, bv in zip(table.labels, bells):
                proj = inner_product(sig, bv)
                amp = table.amplitudes[B.index, k]
                groups[out.i == out.j][0].append(proj)
                groups[out.i == out.j][1].append(amp)
                assert (abs(proj) > 1e-9) == (abs(amp) > 1e-9)
        for diag, (xs, ys) in groups.items():
            if not any(abs(x) > 1e-6 for x in xs):
                continue
            c = fit_constant(xs, ys)
            assert np.max(np.abs(c * np.asarray(xs) - np.asarray(ys))) < 1e-12
            assert c == pytest.approx(np.sqrt(2) if diag else 1.0, abs=1e-12)


@given(st.integers(1, 2), seeds, st.sampled_from(list(Statistics)))
@settings(max_examples=20, deadline=None)
def test_phase_invariance(n, seed, stats):
    app = haar_random(n, seed)
    phases = np.random.default_rng(seed).uniform(0, 2 * np.pi, app.modes)
    a = signature_table(app, stats).amplitudes
    b = signature_table(phase_shifted(app, phases), stats).amplitudes
    assert np.max(np.abs(np.abs(a) - np.abs(b))) < 1e-12


def test_label_mismatch_rejected():
    with pytest.raises(ValueError):
        outcome_amplitude(hadamard_lr(1), "boson", BellLabel((0, 0)), (1, 1))
    with pytest.raises(ValueError):
        outcome_amplitude(hadamard_lr(1), "boson", PHI_P, (1, 5))
