import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from hendo.hecke import CacheError, HeckeAlgebra, HeckeElement, load_kl_cache, save_kl_cache
from hendo.ring import LaurentPoly, ONE, random_laurent, t_pow

import oracles
from systems import system

KL_TAGS = ["A1", "A2", "B2", "G2", "2F4", "SU5", "A3"]


@pytest.mark.parametrize("tag", KL_TAGS)
def test_kl_basis_against_independent_bar(tag):
    W, H, *_ = system(tag)
    assert oracles.kl_failures(W, H) == []
    assert all(H.check_kl_conditions(w) for w in range(W.size))


def test_kl_polynomials_A3_known_values():
    # the singular Schubert varieties of S4 are those of 3412 and 4231,
    # and for both P_{e,w}(q) = 1 + q
    W, H, *_ = system("A3")
    singular = {w for w in range(W.size) if any(len(q.c) > 1 for q in H.kl(w).values())}
    assert {oracles.perm_of(W, w) for w in singular} == {(2, 3, 0, 1), (3, 1, 2, 0)}
    for w in singular:
        ell = len(W.words[w])
        assert H.kl(w)[0] == t_pow(-ell) + t_pow(2 - ell)


def test_quadratic_relation_unequal():
    W, H, *_ = system("2F4")
    for s in range(W.rank):
        e = W.rmul[0][s]
        q = t_pow(2 * W.weights[s])
        lhs = H.mul(H.T(e), H.T(e), "T")
        assert lhs == H.element("T", {e: q - ONE, 0: q})


def _random_element(H, rng, basis):
    return HeckeElement(H, basis, {rng.randrange(H.W.size): random_laurent(rng, terms=2, bound=3)
                                   for _ in range(3)})


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "2F4"]), st.sampled_from(["T", "Ttilde", "C"]), st.integers(0, 10 ** 6))
def test_multiplication_is_associative(tag, basis, seed):
    W, H, *_ = system(tag)
    rng = random.Random(seed)
    a, b, c = (_random_element(H, rng, basis) for _ in range(3))
    assert H.mul(H.mul(a, b, basis), c, basis) == H.mul(a, H.mul(b, c, basis), basis)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(0, 10 ** 6))
def test_basis_conversions_are_inverse(tag, seed):
    W, H, *_ = system(tag)
    a = _random_element(H, random.Random(seed), "T")
    for mid in ("Ttilde", "C"):
        assert a.to(mid).to("T") == a
    assert a.to("C").to("Ttilde").to("C") == a.to("C")


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "2F4"]), st.integers(0, 10 ** 6))
def test_dagger_and_bar_commute(tag, seed):
    W, H, *_ = system(tag)
    a = _random_element(H, random.Random(seed), "T")
    assert H.dagger(H.bar_H(a)) == H.bar_H(H.dagger(a))
    assert H.bar_H(H.bar_H(a)) == a


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2"]), st.integers(0, 10 ** 6))
def test_bar_matches_oracle_on_random_elements(tag, seed):
    W, H, *_ = system(tag)
    a = _random_element(H, random.Random(seed), "T")
    ref = oracles.bar_of(W, oracles.bar_T_table(W), a.coeffs)
    assert H.bar_H(a).to("T").coeffs == ref


# ------------------------------------------------------------------ cache

def _bump(obj):
    return (LaurentPoly.from_json(obj) + t_pow(1)).to_json()


def test_cache_round_trip(tmp_path):
    W, H, *_ = system("B2")
    path = tmp_path / "kl.json"
    save_kl_cache(H, str(path))
    fresh = HeckeAlgebra(W)
    load_kl_cache(fresh, str(path))
    assert all(fresh.kl(w) == H.kl(w) for w in range(W.size))


def test_cache_rejects_tampering(tmp_path):
    W, H, *_ = system("A2")
    path = tmp_path / "kl.json"
    save_kl_cache(H, str(path))
    data = json.loads(path.read_text())
    key = next(k for k in data["p"] if k.split("|")[0] != k.split("|")[1])
    data["p"][key] = _bump(data["p"][key])
    path.write_text(json.dumps(data))
    with pytest.raises(CacheError):
        load_kl_cache(HeckeAlgebra(W), str(path))


def test_cache_rejects_version_and_system(tmp_path):
    W, H, *_ = system("A2")
    path = tmp_path / "kl.json"
    save_kl_cache(H, str(path))
    data = json.loads(path.read_text())
    data["version"] = 99
    path.write_text(json.dumps(data))
    with pytest.raises(CacheError):
        load_kl_cache(HeckeAlgebra(W), str(path))
    save_kl_cache(H, str(path))
    with pytest.raises(CacheError):
        load_kl_cache(HeckeAlgebra(system("B2")[0]), str(path))
    path.write_text("{not json")
    with pytest.raises(CacheError):
        load_kl_cache(HeckeAlgebra(W), str(path))

