from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rationals(lo=-3, hi=3, max_den=6):
    return st.fractions(min_value=Fraction(lo), max_value=Fraction(hi), max_denominator=max_den)


def positive_rationals(hi=3, max_den=6):
    return rationals(0, hi, max_den).filter(lambda x: x > 0)


@st.composite
def normalised_specs(draw, lo_c=-1, allow_stripe=False):
    """Shape parameters ``(b, c)`` of a mean-0, variance-1 free Meixner law."""
    from freemeixner.meixner import FreeMeixnerSpec

    b = draw(rationals(-3, 3, 4))
    c = draw(rationals(lo_c, 3, 4))
    if not allow_stripe and c == Fraction(-1, 2) and b != 0:
        c = Fraction(-1, 4)
    return FreeMeixnerSpec(b, c)
