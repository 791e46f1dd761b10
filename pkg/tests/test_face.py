"""Dominant-face predicates: the two equivalent descriptions, face
decomposition into sub-face factors, degeneracy and dimension."""

import numpy as np
import pytest

from cranregions import (
    FaceQuery,
    RateFronthaulPoint,
    check_degenerate_factorization,
    check_face_decomposition,
    degeneracy_condition,
    dominant_face_dimension,
    enumerate_corners,
    face_gap,
    in_face_FST,
    on_dominant_face,
    on_dominant_face_alt,
    sample_face_points,
)
from cranregions.prob import build_uplink_joint
from cranregions.face import in_sub_face_DST, in_sub_face_cond

from conftest import identity_chain_spec, k2l2_bsc_spec, product_spec, random_uplink_spec


def admissible_queries(K, L):
    import itertools

    users = list(range(1, K + 1))
    relays = list(range(1, L + 1))
    out = []
    for rs in range(len(users) + 1):
        for S in itertools.combinations(users, rs):
            for rt in range(len(relays) + 1):
                for T in itertools.combinations(relays, rt):
                    S_, T_ = set(S), set(T)
                    if (S_ | T_) and ((set(users) - S_) | (set(relays) - T_)):
                        out.append(FaceQuery(frozenset(S_), frozenset(T_)))
    return out


class TestDominantFace:
    def test_identity_chain_face_points(self):
        law = build_uplink_joint(identity_chain_spec())
        assert on_dominant_face(law, RateFronthaulPoint(np.array([1.0]), np.array([1.0])))
        assert on_dominant_face(law, RateFronthaulPoint(np.array([0.0]), np.array([0.0])))
        assert on_dominant_face(law, RateFronthaulPoint(np.array([0.5]), np.array([0.5])))
        # in the region but above the face
        assert not on_dominant_face(
            law, RateFronthaulPoint(np.array([0.5]), np.array([1.0]))
        )

    def test_face_gap_sign(self):
        law = build_uplink_joint(identity_chain_spec())
        assert face_gap(law, RateFronthaulPoint(np.array([0.5]), np.array([1.0]))) == pytest.approx(0.5)

    def test_all_corners_on_face(self, rng):
        for _ in range(3):
            law = build_uplink_joint(random_uplink_spec(rng))
            for v in enumerate_corners(law).vertices:
                assert on_dominant_face(law, v, tol=1e-8)

    def test_descriptions_agree(self, rng):
        """Both face descriptions classify 500 mixed points identically."""
        law = build_uplink_joint(k2l2_bsc_spec())
        pts = list(enumerate_corners(law).vertices)
        pts += sample_face_points(law, 250, rng)
        mat = np.array([v.as_vector() for v in pts[:4]])
        lo, hi = mat.min(axis=0) - 0.25, mat.max(axis=0) + 0.25
        for _ in range(250):
            pts.append(RateFronthaulPoint.from_vector(rng.uniform(lo, hi), 2, 2))
        for p in pts:
            assert on_dominant_face(law, p) == on_dominant_face_alt(law, p)


class TestFaceFST:
    def test_corner_on_its_face(self, rng):
        law = build_uplink_joint(random_uplink_spec(rng))
        # the all-rates-first corner saturates C([L]) - R([K]) and the
        # face with S = [K], T = [L] is inadmissible; use S={1,2}, T={1}
        found_any = False
        for q in admissible_queries(2, 2):
            for v in enumerate_corners(law).vertices:
                if in_face_FST(law, v, q):
                    found_any = True
        assert found_any

    def test_decomposition_forward_and_converse(self, rng):
        law = build_uplink_joint(k2l2_bsc_spec())
        for q in admissible_queries(2, 2):
            rep = check_face_decomposition(law, q, samples=50, seed=3)
            assert rep.passed, (sorted(q.S), sorted(q.T))

    def test_perturbed_point_violates_sub_face(self):
        """Pushing a face corner off its face breaks the two-sided bounds."""
        law = build_uplink_joint(k2l2_bsc_spec())
        q = FaceQuery(frozenset({1}), frozenset({1}))
        corners = [
            v for v in enumerate_corners(law).vertices if in_face_FST(law, v, q)
        ]
        assert corners
        v = corners[0].as_vector()
        v[0] += 0.1  # raise R_1 without compensating
        bad = RateFronthaulPoint.from_vector(v, 2, 2)
        assert not (
            in_sub_face_DST(law, bad, q)
            and in_sub_face_cond(law, bad, q)
            and in_face_FST(law, bad, q)
        )


class TestDegeneracy:
    def test_product_spec_separating_pair(self):
        law = build_uplink_joint(product_spec())
        q = FaceQuery(frozenset({1}), frozenset({1}))
        assert degeneracy_condition(law, q)
        assert check_degenerate_factorization(law, q)

    def test_coupled_spec_never_degenerate(self):
        law = build_uplink_joint(k2l2_bsc_spec())
        for q in admissible_queries(2, 2):
            assert not degeneracy_condition(law, q), (sorted(q.S), sorted(q.T))

    def test_dimension_drop_iff_product(self):
        dim_prod = dominant_face_dimension(build_uplink_joint(product_spec()))
        dim_coup = dominant_face_dimension(build_uplink_joint(k2l2_bsc_spec()))
        assert dim_prod < 3
        assert dim_coup == 3


class TestFaceQueryValidation:
    def test_empty_union_rejected(self):
        with pytest.raises(ValueError):
            FaceQuery(frozenset(), frozenset()).validate(2, 2)

    def test_full_union_rejected(self):
        with pytest.raises(ValueError):
            FaceQuery(frozenset({1, 2}), frozenset({1, 2})).validate(2, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            FaceQuery(frozenset({3}), frozenset()).validate(2, 2)
