import numpy as np
import pytest

import prrp


def reconstruct(f, a):
    pa = a[np.asarray(f["perm"])]
    return np.linalg.norm(pa - f["l"] @ f["u"]) / np.linalg.norm(a)


FACTORS = {
    "gepp": lambda a: prrp.gepp(a),
    "luprrp": lambda a: prrp.luprrp(a, 8),
    "caluprrp_bt": lambda a: prrp.caluprrp(a, 8, tree="bt", p=4),
    "caluprrp_ft": lambda a: prrp.caluprrp(a, 8, tree="ft"),
    "calu": lambda a: prrp.calu(a, 8),
    "block_parallel": lambda a: prrp.block_parallel(a, 8, p=2),
    "block_pairwise": lambda a: prrp.block_pairwise(a, 8),
}


@pytest.mark.parametrize("name", sorted(FACTORS))
def test_factorizations_reconstruct(name):
    a = prrp.generate("randn:96:seed=4")
    f = FACTORS[name](a)
    assert reconstruct(f, a) < 1e-13
    assert np.allclose(np.triu(f["u"]), f["u"])
    assert f["growth"] >= 1.0


def test_generate_matches_numpy_statistics():
    a = prrp.generate("randn:256:seed=1")
    assert a.shape == (256, 256)
    assert abs(a.mean()) < 0.02
    assert abs(a.var() - 1.0) < 0.02
    assert np.array_equal(a, prrp.generate("randn:256:seed=1"))


def test_strong_rrqr_bound():
    a = np.random.default_rng(0).standard_normal((6, 40))
    r = prrp.strong_rrqr(a, 6, 1.1)
    assert r["max_entry"] <= 1.1
    sel = r["perm"][:6]
    rest = r["perm"][6:]
    ratio = np.linalg.solve(a[:, sel], a[:, rest])
    assert np.abs(ratio).max() <= 1.1 * (1 + 1e-10)


def test_wilkinson_gepp_growth():
    assert prrp.gepp(prrp.generate("wilkinson:10"))["growth"] == 2.0 ** 9


def test_run_reports_small_backward_error():
    a = prrp.generate("randn:128:seed=2")
    rep = prrp.run(a, "caluprrp_bt", b=8, p=4)
    assert rep["eta"] < 1e-14
    assert rep["rel_fact_error"] < 1e-13
    assert max(rep["hpl"]) < 16


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        prrp.generate("nosuch:4")
    with pytest.raises(ArithmeticError):
        prrp.gepp(np.zeros((3, 3)))


def test_cost_model_and_presets():
    c = prrp.perf_model("caluprrp", 4096, 4096, 64, 8, 8)
    assert c["messages"] == 960.0
    assert prrp.perf_model("calu", 4096, 4096, 64, 8, 8)["words"] == c["words"]
    assert prrp.optimal_layout(4096, 4096, 16)["b_int"] == 64
    names = [n for n, _ in prrp.presets()]
    assert "table2" in names
    text = prrp.run_preset("table1")
    assert text.startswith("# prrp1\n")
    assert prrp.run_preset("table2", max_n=32) == prrp.run_preset("table2", max_n=32)
