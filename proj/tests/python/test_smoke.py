import math

import numpy as np
import pytest

import qcorr


def h(p):
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_bell_state_measures():
    rho = qcorr.bell_state().density()
    assert rho.dims == [2, 2]
    assert qcorr.conditional_entropy(rho, "a", "b") == pytest.approx(-1.0, abs=1e-12)
    assert qcorr.mutual_information(rho, "a", "b") == pytest.approx(2.0, abs=1e-12)
    assert qcorr.concurrence_2q(rho) == pytest.approx(1.0, abs=1e-12)
    assert qcorr.discord(rho, "a", "b")["discord"] == pytest.approx(1.0, abs=1e-6)
    assert not qcorr.is_ppt(rho, "b")["ppt"]


def test_density_matrix_from_numpy():
    m = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
    rho = qcorr.DensityMatrix(m, [2, 2])
    assert rho.labels == ["a", "b"]
    assert np.allclose(rho.reduced(["a"]).matrix, np.eye(2) / 2)
    assert qcorr.von_neumann_entropy(rho) == pytest.approx(1.0)
    with pytest.raises(qcorr.ValidationError):
        qcorr.DensityMatrix(np.diag([0.5, 0.4]).astype(complex), [2])


def test_example_family_report():
    r = qcorr.theorem2_report(math.pi / 2, math.pi / 4, with_ree=False)
    assert r["e_distillable"]["upper"] == pytest.approx(0.399124, abs=1e-6)
    assert r["e_cost"]["upper"] == pytest.approx(0.600876, abs=1e-6)
    assert r["delta_loss"] == pytest.approx(0.201752, abs=1e-6)
    assert r["e_cost"]["provenance"] == "exact-by-additivity"
    assert r["chain_violations"] == []


def test_koashi_winter_and_closed_form_agree():
    for seed in range(5):
        psi = qcorr.random_pure_state([2, 2, 2], seed)
        rho_ab = psi.reduced(["a", "b"])
        assert qcorr.eof_via_koashi_winter(psi) == pytest.approx(qcorr.eof_2q(rho_ab), abs=1e-4)


def test_eof_closed_form_curve():
    for phi in np.linspace(0, math.pi / 2, 9):
        sigma = qcorr.example_family(math.pi / 2, phi)["sigma_ab"]
        assert qcorr.eof_2q(sigma) == pytest.approx(h((1 + math.sin(phi)) / 2), abs=1e-9)


def test_documents_round_trip():
    rho = qcorr.random_density_matrix([2, 3], 4, 7)
    text = qcorr.dump_state(rho)
    back = qcorr.parse_state(text)
    assert np.array_equal(back.matrix, rho.matrix)
    with pytest.raises(qcorr.ParseError):
        qcorr.parse_state('{"dims": [2,')


def test_unsupported_dimension():
    rho = qcorr.random_density_matrix([2, 5], 3, 1)
    with pytest.raises(qcorr.UnsupportedDimension):
        qcorr.discord(rho, "a", "b")


def test_verdicts():
    assert qcorr.lemma1_check(qcorr.bell_state().density())["classification"] == "pure"
    sigma = qcorr.example_family(1.0, 0.6)["sigma_ab"]
    assert qcorr.irreversibility_conditions(sigma)["verdict"] == "irreversible by Theorem 2"
