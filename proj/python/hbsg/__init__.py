"""Exact sumset arithmetic, the popular-intersector selector, a constructive
BSG extractor and the string-set extraction pipeline.

Elements are ints (coordinate lists for vector groups). ``group`` is a dict
such as ``{"kind": "cyclic", "modulus": 31}``; omitted, the integers are
used (a window of +-2**40).
"""

import json
from fractions import Fraction

from . import _core
from ._core import BudgetExceeded, Error, InvalidArgument, SpecMismatch, WindowOverflow

__all__ = [
    "sumset", "difference_set", "iterated_sumset", "additive_energy", "doubling_constant",
    "plunnecke_check", "ruzsa_triangle_check", "sigma", "select_popular_intersector",
    "bsg_extract", "best_subset_growth", "generate_instance", "run_instance",
    "BudgetExceeded", "Error", "InvalidArgument", "SpecMismatch", "WindowOverflow",
]


def _g(group):
    return "" if group is None else json.dumps(group)


def _s(elements):
    return json.dumps(list(elements))


def sumset(x, y, group=None):
    return json.loads(_core.sumset(_g(group), _s(x), _s(y)))


def difference_set(x, y, group=None):
    return json.loads(_core.difference_set(_g(group), _s(x), _s(y)))


def iterated_sumset(x, ell, group=None):
    return json.loads(_core.iterated_sumset(_g(group), _s(x), ell))


def additive_energy(x, y, group=None):
    return _core.additive_energy(_g(group), _s(x), _s(y))


def doubling_constant(x, group=None):
    return Fraction(_core.doubling_constant(_g(group), _s(x)))


def plunnecke_check(x, ell_max, group=None):
    return json.loads(_core.plunnecke_check(_g(group), _s(x), ell_max))


def ruzsa_triangle_check(x, y, z, group=None):
    return json.loads(_core.ruzsa_triangle_check(_g(group), _s(x), _s(y), _s(z)))


def sigma(ambient, k, strings=None, deleted=None, group=None):
    """Sum image of a string set given by its members or by its deletions from A^k."""
    if (strings is None) == (deleted is None):
        raise ValueError("pass exactly one of strings, deleted")
    spec = {"k": k, "strings" if strings is not None else "deleted":
            [list(s) for s in (strings if strings is not None else deleted)]}
    return json.loads(_core.sigma(_g(group), _s(ambient), json.dumps(spec)))


def select_popular_intersector(universe_size, members, delta):
    return json.loads(_core.select_popular_intersector(
        universe_size, [list(m) for m in members], str(Fraction(delta))))


def bsg_extract(x, group=None, **config):
    cfg = {k: str(Fraction(v)) if k != "schedule_steps" and k != "max_candidates" else v
           for k, v in config.items()}
    return json.loads(_core.bsg_extract(_g(group), _s(x), json.dumps(cfg)))


def best_subset_growth(a, ell, min_size, group=None):
    elements, size = _core.best_subset_growth(_g(group), _s(a), ell, min_size)
    return json.loads(elements), size


def generate_instance(spec):
    """The instance in explicit form (ambient elements and strings or deletions)."""
    return json.loads(_core.generate_instance(json.dumps(spec)))


def run_instance(spec, oracle=False):
    """Generates and runs one instance; returns the report dict."""
    return json.loads(_core.run_instance(json.dumps(spec), oracle))
