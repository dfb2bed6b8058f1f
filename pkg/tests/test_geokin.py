import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdmpsim.geokin import (
    THIRDS,
    CoincidentPointsError,
    DegenerateGeometryError,
    Kinematics,
    Point2,
    WeightFactors,
    ZeroSourceDistanceError,
    ZeroVelocityError,
    direction_angle,
    distance,
    neighbor_weight,
    predict_position,
    predicted_distance,
    target_angle,
)

import oracles

finite = st.floats(
    min_value=-1e4, max_value=1e4, allow_nan=False, allow_infinity=False
)


def rand_kin(rng):
    return Kinematics(
        position=Point2(rng.uniform(-500, 500), rng.uniform(-500, 500)),
        speed=rng.uniform(0, 35),
        acceleration=rng.uniform(-2.6, 4.5),
        heading=rng.uniform(0, 2 * math.pi),
    )


class TestDistance:
    def test_identity(self):
        assert distance(Point2(0, 0), Point2(0, 0)) == 0.0

    def test_pythagorean(self):
        assert distance(Point2(0, 0), Point2(3, 4)) == 5.0

    def test_hand_value(self):
        # sqrt(4 + 9) = sqrt(13)
        assert distance(Point2(1.5, -2), Point2(-0.5, 1)) == pytest.approx(
            3.605551275463989, abs=1e-12
        )

    @given(finite, finite, finite, finite)
    def test_symmetric(self, ax, ay, bx, by):
        assert distance(Point2(ax, ay), Point2(bx, by)) == distance(
            Point2(bx, by), Point2(ax, ay)
        )

    def test_triangle_inequality(self):
        rng = random.Random(7)
        for _ in range(500):
            a, b, c = (
                Point2(rng.uniform(-100, 100), rng.uniform(-100, 100))
                for _ in range(3)
            )
            assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12


class TestDirectionAngle:
    def test_toward_destination(self):
        assert direction_angle(0.0, 10.0, Point2(0, 0), Point2(5, 0)) == 0.0

    def test_perpendicular(self):
        assert direction_angle(
            math.pi / 2, 10.0, Point2(0, 0), Point2(5, 0)
        ) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_hand_value(self):
        # heading (1,0), segment origin->(-1,1): arccos(-1/sqrt(2)) = 3pi/4
        assert direction_angle(
            0.0, 1.0, Point2(0, 0), Point2(-1, 1)
        ) == pytest.approx(2.356194490192345, abs=1e-12)

    def test_zero_velocity_rejected(self):
        with pytest.raises(ZeroVelocityError):
            direction_angle(0.0, 0.0, Point2(0, 0), Point2(1, 0))

    def test_coincident_rejected(self):
        with pytest.raises(CoincidentPointsError):
            direction_angle(0.0, 1.0, Point2(2, 3), Point2(2, 3))

    def test_against_atan2_oracle(self):
        rng = random.Random(11)
        for _ in range(1000):
            h = rng.uniform(0, 2 * math.pi)
            fx, fy = rng.uniform(-50, 50), rng.uniform(-50, 50)
            tx, ty = rng.uniform(-50, 50), rng.uniform(-50, 50)
            if (fx, fy) == (tx, ty):
                continue
            got = direction_angle(h, 5.0, Point2(fx, fy), Point2(tx, ty))
            assert got == pytest.approx(
                oracles.direction_angle_ref(h, fx, fy, tx, ty), abs=1e-9
            )


class TestPredictPosition:
    def test_stationary(self):
        k = Kinematics(Point2(4, -7), 0.0, 0.0, 1.0)
        assert predict_position(k, 12.0) == Point2(4, -7)

    def test_uniform_motion(self):
        k = Kinematics(Point2(0, 0), 10.0, 0.0, 0.0)
        assert predict_position(k, 1.0) == Point2(10.0, 0.0)

    def test_hand_value(self):
        k = Kinematics(Point2(0, 0), 10.0, 2.0, math.pi / 2)
        p = predict_position(k, 1.0)
        assert p.x == pytest.approx(0.0, abs=1e-12)
        assert p.y == pytest.approx(11.0, abs=1e-12)

    def test_zero_horizon_exact(self):
        rng = random.Random(3)
        for _ in range(100):
            k = rand_kin(rng)
            assert predict_position(k, 0.0) == k.position

    def test_deceleration_never_reverses(self):
        k = Kinematics(Point2(0, 0), 2.0, -2.6, 0.0)
        # displacement term goes negative well before t=5
        p = predict_position(k, 5.0)
        assert p == Point2(0, 0)

    def test_negative_horizon_rejected(self):
        k = Kinematics(Point2(0, 0), 1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            predict_position(k, -1.0)

    def test_against_complex_oracle(self):
        rng = random.Random(5)
        for _ in range(1000):
            k = rand_kin(rng)
            t = rng.uniform(0, 5)
            rx, ry = oracles.predict_position_ref(
                k.position.x, k.position.y, k.speed, k.acceleration,
                k.heading, t,
            )
            p = predict_position(k, t)
            assert p.x == pytest.approx(rx, abs=1e-9)
            assert p.y == pytest.approx(ry, abs=1e-9)


class TestPredictedDistance:
    def test_reduces_to_distance(self):
        k1 = Kinematics(Point2(0, 0), 0.0, 0.0, 0.0)
        k2 = Kinematics(Point2(3, 4), 0.0, 0.0, 0.0)
        assert predicted_distance(k1, k2, 7.0) == 5.0

    def test_identical_kinematics(self):
        k = Kinematics(Point2(1, 2), 8.0, 1.0, 0.3)
        assert predicted_distance(k, k, 2.0) == 0.0

    def test_compositional_oracle(self):
        rng = random.Random(13)
        for _ in range(1000):
            k1, k2 = rand_kin(rng), rand_kin(rng)
            t = rng.uniform(0, 3)
            composed = distance(
                predict_position(k1, t), predict_position(k2, t)
            )
            assert abs(predicted_distance(k1, k2, t) - composed) <= 1e-12


class TestTargetAngle:
    def test_same_target(self):
        assert target_angle(Point2(0, 0), Point2(5, 5), Point2(5, 5)) == 0.0
        assert target_angle(
            Point2(1.0, -2.0), Point2(0.1, 0.7), Point2(0.1, 0.7)
        ) == 0.0

    def test_opposite_collinear(self):
        assert target_angle(
            Point2(0, 0), Point2(3, 0), Point2(-2, 0)
        ) == pytest.approx(math.pi, abs=1e-12)

    def test_hand_value(self):
        assert target_angle(
            Point2(0, 0), Point2(1, 0), Point2(0, 1)
        ) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            target_angle(Point2(1, 1), Point2(1, 1), Point2(2, 2))
        with pytest.raises(DegenerateGeometryError):
            target_angle(Point2(1, 1), Point2(2, 2), Point2(1, 1))

    def test_against_law_of_cosines(self):
        rng = random.Random(17)
        for _ in range(1000):
            pts = [
                (rng.uniform(-100, 100), rng.uniform(-100, 100))
                for _ in range(3)
            ]
            (ix, iy), (ax, ay), (bx, by) = pts
            got = target_angle(Point2(ix, iy), Point2(ax, ay), Point2(bx, by))
            assert got == pytest.approx(
                oracles.target_angle_ref(ix, iy, ax, ay, bx, by), abs=1e-9
            )


class TestWeightFactors:
    def test_valid(self):
        WeightFactors(0.4, 0.3, 0.3)
        WeightFactors(1.0, 0.0, 0.0)
        assert THIRDS.p + THIRDS.q1 + THIRDS.q2 == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "p,q1,q2", [(0.5, 0.5, 0.5), (0.333, 0.333, 0.333), (1.1, -0.05, -0.05)]
    )
    def test_bad_sum_or_sign(self, p, q1, q2):
        with pytest.raises(ValueError):
            WeightFactors(p, q1, q2)


class TestNeighborWeight:
    def test_all_terms_max(self):
        w = neighbor_weight(WeightFactors(0.333, 0.333, 0.334), 100.0, 0.0, 1.0, 1.0)
        assert w == pytest.approx(1.0, abs=1e-12)
        w = neighbor_weight(
            WeightFactors(1 / 3, 1 / 3, 1 / 3), 100.0, 0.0, 1.0, 1.0
        )
        assert w == pytest.approx(1.0, abs=1e-12)

    def test_all_terms_zero(self):
        assert neighbor_weight(THIRDS, 50.0, 50.0, 0.0, 0.0) == 0.0

    def test_hand_value(self):
        w = neighbor_weight(WeightFactors(0.4, 0.3, 0.3), 100.0, 50.0, 0.8, -0.5)
        assert w == pytest.approx(0.29, abs=1e-12)

    def test_zero_source_distance_rejected(self):
        with pytest.raises(ZeroSourceDistanceError):
            neighbor_weight(THIRDS, 0.0, 1.0, 0.0, 0.0)

    def test_against_fraction_oracle(self):
        rng = random.Random(19)
        for _ in range(1000):
            p = rng.uniform(0, 1)
            q1 = rng.uniform(0, 1 - p)
            q2 = 1.0 - p - q1
            if q2 < 0:
                continue
            f = WeightFactors(p, q1, q2)
            d_sd = rng.uniform(1e-3, 500)
            d_id = rng.uniform(0, 600)
            vc = rng.uniform(-1, 1)
            tc = rng.uniform(-1, 1)
            assert neighbor_weight(f, d_sd, d_id, vc, tc) == pytest.approx(
                oracles.neighbor_weight_ref(p, q1, q2, d_sd, d_id, vc, tc),
                abs=1e-9,
            )

    def test_bounded_by_one_for_closer_neighbors(self):
        rng = random.Random(23)
        for _ in range(500):
            p = rng.uniform(0, 1)
            q1 = rng.uniform(0, 1 - p)
            q2 = 1.0 - p - q1
            d_sd = rng.uniform(1.0, 500)
            d_id = rng.uniform(0, d_sd * 0.999)  # strictly closer
            w = neighbor_weight(
                WeightFactors(p, q1, q2),
                d_sd,
                d_id,
                rng.uniform(-1, 1),
                rng.uniform(-1, 1),
            )
            assert w <= 1.0 + 1e-12


class TestRigidMotionInvariance:
    """Angles must not change under global rotation + translation."""

    @staticmethod
    def _rot(p: Point2, ang: float, shift: Point2) -> Point2:
        c, s = math.cos(ang), math.sin(ang)
        return Point2(
            c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y
        )

    def test_direction_angle_invariant(self):
        rng = random.Random(29)
        for _ in range(300):
            h = rng.uniform(0, 2 * math.pi)
            frm = Point2(rng.uniform(-50, 50), rng.uniform(-50, 50))
            to = Point2(rng.uniform(-50, 50), rng.uniform(-50, 50))
            if frm == to:
                continue
            ang = rng.uniform(0, 2 * math.pi)
            shift = Point2(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3))
            base = direction_angle(h, 3.0, frm, to)
            moved = direction_angle(
                h + ang, 3.0, self._rot(frm, ang, shift), self._rot(to, ang, shift)
            )
            assert moved == pytest.approx(base, abs=1e-9)

    def test_target_angle_invariant(self):
        rng = random.Random(31)
        for _ in range(300):
            pts = [
                Point2(rng.uniform(-50, 50), rng.uniform(-50, 50))
                for _ in range(3)
            ]
            ang = rng.uniform(0, 2 * math.pi)
            shift = Point2(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3))
            base = target_angle(*pts)
            moved = target_angle(*(self._rot(p, ang, shift) for p in pts))
            assert moved == pytest.approx(base, abs=1e-9)


@settings(max_examples=200)
@given(
    st.floats(min_value=0, max_value=35),
    st.floats(min_value=-2.6, max_value=4.5),
    st.floats(min_value=0, max_value=2 * math.pi, exclude_max=True),
    st.floats(min_value=0, max_value=10),
)
def test_prediction_displacement_nonnegative(v, a, heading, t):
    k = Kinematics(Point2(0.0, 0.0), v, a, heading)
    p = predict_position(k, t)
    # displacement is along the heading and never negative
    disp = math.hypot(p.x, p.y)
    assert disp >= 0.0
    expected = max(0.0, v * t + 0.5 * a * t * t)
    assert disp == pytest.approx(expected, abs=1e-9)
