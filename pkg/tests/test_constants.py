import math

import pytest
import sympy as sp

from isospan.constants import (
    K,
    K1_CONVENTION,
    ConstantLedger,
    base_constant,
    final_constant,
    script_L,
    step_constant,
    step_lower_bounds,
    isoperimetric_constant,
)
from isospan.errors import PreconditionError


def oracle(m, k, N):
    """Exact recurrence in sympy, written from the closed-form definitions."""
    if m == 1:
        return sp.Integer(1)
    if k == N:
        return 2 ** (2 * m - 1) * sp.sqrt(N)
    low = oracle(m - 1, 0, N - 1)
    f = 1 + 2 * (2 * low) ** sp.Rational(1, m - 1)
    nxt = oracle(m, k + 1, N)
    a, b = nxt * f * 2 * (1 + 2 * low), nxt * f + low
    return a if (a - b).evalf(50) >= 0 else b


@pytest.mark.parametrize("m, N, expect", [(2, 2, 8 * math.sqrt(2)), (2, 3, 8 * math.sqrt(3)),
                                          (3, 3, 32 * math.sqrt(3))])
def test_base_constant(m, N, expect):
    assert base_constant(m, N) == pytest.approx(expect, rel=1e-15)


def test_base_constant_domain():
    with pytest.raises(PreconditionError):
        base_constant(1, 2)
    with pytest.raises(PreconditionError):
        base_constant(3, 2)


def test_script_L_examples():
    assert K1_CONVENTION == 1.0
    assert script_L(2, 1.0) == pytest.approx(5.0)
    assert script_L(2, 0.3) == pytest.approx(1.5)
    k20 = K(2, 0, 2)
    assert script_L(3, 1.0, 3) == pytest.approx(1 + 2 * math.sqrt(2 * k20))
    with pytest.raises(PreconditionError):
        script_L(2, 0.0)


def test_step_bounds_for_m2():
    a, b = step_lower_bounds(2, 2, 2)
    kk = K(2, 2, 2)
    assert a == pytest.approx(30 * kk) and b == pytest.approx(5 * kk + 1)
    assert step_constant(2, 2, 2) == pytest.approx(30 * kk)


@pytest.mark.parametrize("k, expect", [(2, 8 * math.sqrt(2)), (1, 240 * math.sqrt(2)),
                                       (0, 7200 * math.sqrt(2))])
def test_m2_n2_closed_forms(k, expect):
    assert K(2, k, 2) == pytest.approx(expect, rel=1e-12)


def test_m2_n3_final():
    assert final_constant(2, 3) == pytest.approx(216000 * math.sqrt(3), rel=1e-12)


@pytest.mark.parametrize("m,N", [(m, N) for m in (2, 3, 4) for N in (2, 3, 4) if N >= m])
def test_ledger_against_exact_recurrence(m, N):
    for k in range(N + 1):
        assert K(m, k, N) == pytest.approx(float(oracle(m, k, N)), rel=1e-12)


def test_ledger_invariants():
    led = ConstantLedger(4)
    for (m, k, N), v in led.table.items():
        assert math.isfinite(v) and v > 0
        if m >= 2:
            if k == N:
                assert v == pytest.approx(2 ** (2 * m - 1) * math.sqrt(N))
            else:
                assert v >= max(step_lower_bounds(m, k + 1, N)) * (1 - 1e-15)
                assert v >= led.table[(m, k + 1, N)]


def test_final_constant_monotone_in_n():
    vals = [final_constant(2, n) for n in range(2, 6)]
    assert vals == sorted(vals)
    assert isoperimetric_constant(2, 3) == pytest.approx(4 * final_constant(2, 3))


def test_ledger_json_and_table():
    led = ConstantLedger(3, 2)
    js = led.to_json()
    assert js["K1_0_convention"] == 1.0
    assert js["final_constant"]["2"] == pytest.approx(216000 * math.sqrt(3))
    text = led.format_table()
    assert "374122.9744" in text and "convention" in text
    assert ConstantLedger(3, 2).rows() == led.rows()
