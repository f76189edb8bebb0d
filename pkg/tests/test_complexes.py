import random

import pytest
from hypothesis import given, strategies as st

from aisles.algebra import dual_numbers, field_algebra, kronecker_algebra
from aisles.complexes import (BoundedComplex, ChainMap, ComplexError, DirectedSystem, HomComplex,
                              cancel_contractible, cohomology_rank, colimit, compose, cone,
                              direct_sum_complexes, hocolim_bicomplex, hocolim_sequence,
                              homotopy_class_basis, identity_map, is_null_homotopic, is_quasi_iso,
                              module_complex, perfect_resolution, regular_complex, shift, shift_map,
                              soft_truncation_geq, soft_truncation_leq, zero_map)
from aisles.fixtures import (FIXTURE_NAMES, fixture_algebra, random_chain_map, random_complex,
                             random_poset_system, random_sequence_system)
from aisles.linalg import QQ, Matrix
from aisles.rep import direct_sum, hom_module, projective

from oracles import bruteforce_hom_dim


FIELD_K = field_algebra()


def K_in_degree(n, dim=1):
    K = FIELD_K
    return shift(module_complex(direct_sum([projective(K, 0)] * dim, K)), -n)


def kron_arrow_cone():
    A = kronecker_algebra()
    P0, P1 = projective(A, 0), projective(A, 1)
    h = [m.matrix for m in hom_module(P1, P0)]
    S = module_complex(direct_sum([P1, P1], A))
    T = module_complex(P0)
    f = ChainMap(S, T, {0: h[0].hstack(h[1])})
    return f


# ---------------------------------------------------------------------------
# shifts and cones

def test_shift_examples():
    C = K_in_degree(0)
    assert shift(C, 0) is C
    assert shift(shift(C, 1), -1).equals(C)
    assert set(shift(C, 1).terms) == {-1}


def test_cone_examples():
    rng = random.Random(3)
    A = kronecker_algebra()
    C = random_complex(A, rng)
    assert cone(identity_map(C))[0].is_acyclic()
    D = random_complex(A, rng)
    Z, _, _ = cone(zero_map(C, D))
    ref = direct_sum_complexes([D, shift(C, 1)])
    assert Z.dims() == ref.dims() and Z.cohomology_dims() == ref.cohomology_dims()


def test_kronecker_arrow_cone():
    C, _, _ = cone(kron_arrow_cone())
    assert C.cohomology_dims() == {0: 1}
    assert C.linear.cohomology_dim(-1) == 0


def test_d_squared_checked():
    D = dual_numbers()
    P = projective(D, 0)
    x = Matrix.from_rows(QQ, [[0, 0], [1, 0]])
    one = Matrix.identity(QQ, 2)
    with pytest.raises(ComplexError):
        BoundedComplex(D, {0: P, 1: P, 2: P}, {0: one, 1: one})
    BoundedComplex(D, {0: P, 1: P, 2: P}, {0: x, 1: x})


def triangle_exact(f):
    C, inc, proj = cone(f)
    seq = [f, inc, proj, shift_map(f, 1)]
    degs = set(f.source.terms) | set(f.target.terms) | set(C.terms)
    degs |= {k - 1 for k in degs}
    for n in degs:
        for g, h in zip(seq, seq[1:]):
            mid = g.target.linear.cohomology_dim(n)
            if cohomology_rank(g, n) + cohomology_rank(h, n) != mid:
                return False
            if cohomology_rank(compose(h, g), n):
                return False
    return True


SEEDS = [(name, s) for name in FIXTURE_NAMES for s in range(8)]


@given(st.sampled_from(SEEDS))
def test_cone_long_exact_sequence(sample):
    name, seed = sample
    rng = random.Random(seed)
    A = fixture_algebra(name)
    S, T = random_complex(A, rng), random_complex(A, rng)
    assert triangle_exact(random_chain_map(S, T, rng))


@given(st.sampled_from(SEEDS), st.integers(-2, 2))
def test_cone_commutes_with_shift(sample, n):
    name, seed = sample
    rng = random.Random(seed)
    A = fixture_algebra(name)
    S, T = random_complex(A, rng), random_complex(A, rng)
    f = random_chain_map(S, T, rng)
    lhs = cone(shift_map(f, n))[0]
    rhs = shift(cone(f)[0], n)
    assert lhs.dims() == rhs.dims()
    # the two agree after the sign (-1)^n on the source summand
    sign = -1 if n % 2 else 1
    Xn = shift(S, n)

    def D(k):
        x, y = Xn.dim(k + 1), lhs.dim(k) - Xn.dim(k + 1)
        diag = [sign] * x + [1] * y
        return Matrix(QQ, len(diag), len(diag), [[diag[i] if i == j else 0 for j in range(len(diag))]
                                                 for i in range(len(diag))])
    for k in lhs.diffs:
        assert lhs.d(k) == D(k + 1) @ rhs.d(k) @ D(k)


# ---------------------------------------------------------------------------
# Hom complexes

def test_hom_complex_examples():
    A = kronecker_algebra()
    RA = regular_complex(A)
    assert HomComplex(RA, RA).linear.cohomology_dims() == {0: 4}
    E, M = module_complex(projective(A, 1)), module_complex(projective(A, 0))
    assert HomComplex(E, M).linear.cohomology_dims() == {0: 2}


@given(st.sampled_from(SEEDS))
def test_hom_from_regular_is_cohomology(sample):
    name, seed = sample
    A = fixture_algebra(name)
    M = random_complex(A, random.Random(seed))
    H = HomComplex(regular_complex(A), M)
    assert H.linear.cohomology_dims() == M.cohomology_dims()


@given(st.sampled_from(SEEDS), st.integers(-2, 2))
def test_hom_complex_matches_bruteforce(sample, k):
    name, seed = sample
    rng = random.Random(seed)
    A = fixture_algebra(name)
    E = random_complex(A, rng, -1, 1, perfect=True)
    M = random_complex(A, rng, -1, 1)
    # Hom(E[k], M) = Hom(E, M[-k])
    assert HomComplex(E, M).linear.cohomology_dim(-k) == bruteforce_hom_dim(E, M, -k)


def test_homotopy_class_basis_examples():
    A = kronecker_algebra()
    RA = regular_complex(A)
    assert len(homotopy_class_basis(RA, RA, 0)) == 4
    assert homotopy_class_basis(RA, module_complex(projective(A, 0)), 3) == []


@given(st.sampled_from(SEEDS), st.integers(-1, 2))
def test_homotopy_class_basis_counts(sample, k):
    name, seed = sample
    A = fixture_algebra(name)
    M = random_complex(A, random.Random(seed))
    E = regular_complex(A)
    basis = homotopy_class_basis(E, M, k)
    assert len(basis) == M.linear.cohomology_dim(-k)
    for f in basis:
        f.validate()
        assert not is_null_homotopic(f, k)


def test_is_quasi_iso_examples():
    rng = random.Random(5)
    A = kronecker_algebra()
    C = random_complex(A, rng)
    while C.is_acyclic():
        C = random_complex(A, rng)
    assert is_quasi_iso(identity_map(C))
    assert not is_quasi_iso(zero_map(C, C))
    Z, _, _ = cone(identity_map(C))
    assert is_quasi_iso(zero_map(Z, BoundedComplex(A, {}, {})))


# ---------------------------------------------------------------------------
# homotopy colimits

def test_constant_system():
    G = K_in_degree(0, 2)
    sys_ = DirectedSystem.sequence([G, G], [identity_map(G)])
    tel, comp = hocolim_sequence(sys_)
    assert is_quasi_iso(comp)
    assert tel.cohomology_dims() == {0: 2}


def test_growing_chain():
    Gs = [K_in_degree(0, n) for n in (1, 2, 3)]
    steps = [ChainMap(Gs[n], Gs[n + 1], {0: Matrix.identity(QQ, n + 2).submatrix(range(n + 2), range(n + 1))})
             for n in range(2)]
    sys_ = DirectedSystem.sequence(Gs, steps)
    tel, comp = hocolim_sequence(sys_)
    assert tel.cohomology_dims() == {0: 3} and is_quasi_iso(comp)
    tot, comp2, colim = hocolim_bicomplex(sys_)
    assert tot.cohomology_dims() == {0: 3} and is_quasi_iso(comp2)


def test_acyclic_identity_system():
    C = cone(identity_map(K_in_degree(0)))[0]
    sys_ = DirectedSystem.sequence([C, C, C], [identity_map(C), identity_map(C)])
    assert hocolim_sequence(sys_)[0].is_acyclic()


def test_one_element_and_two_chain():
    rng = random.Random(1)
    A = kronecker_algebra()
    G = random_complex(A, rng)
    one = DirectedSystem(["s"], [], {"s": G}, {})
    tot, comp, _ = hocolim_bicomplex(one)
    assert tot.cohomology_dims() == G.cohomology_dims() and is_quasi_iso(comp)
    H = random_complex(A, rng)
    f = random_chain_map(G, H, rng)
    two = DirectedSystem(["s", "t"], [("s", "t")], {"s": G, "t": H}, {("s", "t"): f})
    tot, comp, _ = hocolim_bicomplex(two)
    assert tot.cohomology_dims() == H.cohomology_dims()


def test_pushout_of_inclusions():
    # K <- 0 -> K style pushout: two copies of K^2 glued along K
    G = K_in_degree(0, 1)
    H1, H2 = K_in_degree(0, 2), K_in_degree(0, 2)
    i1 = ChainMap(G, H1, {0: Matrix.from_rows(QQ, [[1], [0]])})
    i2 = ChainMap(G, H2, {0: Matrix.from_rows(QQ, [[0], [1]])})
    sys_ = DirectedSystem(["s", "t", "u"], [("s", "t"), ("s", "u")],
                          {"s": G, "t": H1, "u": H2}, {("s", "t"): i1, ("s", "u"): i2})
    colim, _ = colimit(sys_)
    # cokernel construction: (2 + 2) - 1 = 3
    assert colim.cohomology_dims() == {0: 3}
    tot, comp, _ = hocolim_bicomplex(sys_)
    assert tot.cohomology_dims() == {0: 3} and is_quasi_iso(comp)


def test_non_functorial_rejected():
    G = K_in_degree(0)
    f2 = ChainMap(G, G, {0: Matrix.from_rows(QQ, [[2]])})
    f3 = ChainMap(G, G, {0: Matrix.from_rows(QQ, [[3]])})
    f5 = ChainMap(G, G, {0: Matrix.from_rows(QQ, [[5]])})
    with pytest.raises(ComplexError, match=r"\('s', 't', 'u'\)"):
        DirectedSystem(["s", "t", "u"], [("s", "t"), ("t", "u"), ("s", "u")],
                       {"s": G, "t": G, "u": G}, {("s", "t"): f2, ("t", "u"): f3, ("s", "u"): f5})


@given(st.sampled_from(SEEDS))
def test_random_sequence_hocolims(sample):
    name, seed = sample
    A = fixture_algebra(name)
    sys_ = random_sequence_system(A, random.Random(seed))
    last = sys_.complexes[len(sys_.elements) - 1]
    tel, comp = hocolim_sequence(sys_)
    assert is_quasi_iso(comp) and tel.cohomology_dims() == last.cohomology_dims()
    tot, comp2, _ = hocolim_bicomplex(sys_)
    assert is_quasi_iso(comp2)


@given(st.sampled_from(SEEDS), st.sampled_from(["chain", "diamond", "pushout"]))
def test_random_poset_hocolims(sample, shape):
    name, seed = sample
    A = fixture_algebra(name)
    sys_ = random_poset_system(A, random.Random(seed), shape)
    tot, comp, colim = hocolim_bicomplex(sys_)
    assert is_quasi_iso(comp)
    assert tot.cohomology_dims() == colim.cohomology_dims()


# ---------------------------------------------------------------------------
# resolutions and soft truncations

@given(st.sampled_from(SEEDS))
def test_perfect_resolution_quasi_iso(sample):
    from aisles.complexes import ResolutionError
    name, seed = sample
    A = fixture_algebra(name)
    C = random_complex(A, random.Random(seed))
    try:
        P, phi = perfect_resolution(C, 8)
    except ResolutionError:
        assert name == "kx2"
        return
    assert P.is_perfect and is_quasi_iso(phi)


@given(st.sampled_from(SEEDS))
def test_cancel_contractible_preserves_cohomology(sample):
    name, seed = sample
    A = fixture_algebra(name)
    C = random_complex(A, random.Random(seed), perfect=True)
    Q, incl = cancel_contractible(C)
    assert is_quasi_iso(incl)
    assert sum(Q.dims().values()) <= sum(C.dims().values())


@given(st.sampled_from(SEEDS), st.integers(-2, 2))
def test_soft_truncations(sample, n):
    name, seed = sample
    A = fixture_algebra(name)
    M = random_complex(A, random.Random(seed))
    h = M.cohomology_dims()
    assert soft_truncation_leq(M, n).cohomology_dims() == {k: v for k, v in h.items() if k <= n}
    assert soft_truncation_geq(M, n).cohomology_dims() == {k: v for k, v in h.items() if k >= n}
