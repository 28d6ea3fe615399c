from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from kolmogorov_weyl.poly import Poly, monomials_upto
from kolmogorov_weyl.weyl import WeylElem, monomials_deg

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polys(max_degree=6, max_terms=5):
    monos = monomials_upto(3, max_degree)
    return st.dictionaries(st.sampled_from(monos), small_q, max_size=max_terms).map(Poly)


def weyl_elems(max_degree=4, max_terms=4):
    monos = monomials_deg(max_degree)
    return st.dictionaries(st.sampled_from(monos), small_q, max_size=max_terms).map(WeylElem)


def homogeneous_weyl(weight, max_degree=4, max_terms=3):
    monos = [m for m in monomials_deg(max_degree) if m[0] + m[1] - m[2] - m[3] == weight]
    return st.dictionaries(st.sampled_from(monos), small_q, min_size=1, max_size=max_terms).map(WeylElem)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
