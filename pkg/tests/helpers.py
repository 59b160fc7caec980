"""Exhaustive correspondence enumeration on tiny models, shared by tests."""

import itertools

from corrcoh import corr as K
from corrcoh.model import MarkedSpace, Space, iter_assignments

E = Space("E", ["a", "b"], {}, [("a", "b")])
D = Space("D", ["a", "b"], {})
TWO_POINT_J = (E, D)

# S models: weights chosen so that genuine correspondences exist between all pairs
SE = Space("SE", ["a", "b"], {"a": 1, "b": 0}, [("a", "b")])
SD = Space("SD", ["a", "b"], {"a": 1, "b": 0})
TWO_POINT_S = (SE, SD)


def interval(id="M", both_ways=False):
    edges = [("p0", "p1")] + ([("p1", "p0")] if both_ways else [])
    return MarkedSpace(Space(id, ["p0", "p1"], {}, edges), "p0", "p1")


def sheet_maps(y, x, comp, flavor):
    if flavor == "J":
        return list(iter_assignments(y, x, "J", domain=comp))
    # coherent maps of one component into one target component
    out = []
    for tc in x.components():
        out.extend(itertools.product(tc, repeat=len(comp)))
    return out


def component_multisets(y, x, k, flavor, cap):
    comp = y.components()[k]
    maps = sheet_maps(y, x, comp, flavor)
    out = []
    for n in range(cap + 1):
        for ms in itertools.combinations_with_replacement(range(len(maps)), n):
            sheets = [maps[i] for i in ms]
            if flavor == "S":
                prof = [sum((x.weight(s[i]) for s in sheets), 0) for i in range(len(comp))]
                if prof != [y.weight(p) for p in comp]:
                    continue
            out.append([dict(zip(comp, s)) for s in sheets])
    return out


def all_corrs(y, x, flavor, cap=3):
    per = [component_multisets(y, x, k, flavor, cap) for k in range(len(y.components()))]
    return [K.Correspondence(y, x, flavor, list(s)) for s in itertools.product(*per)]


def atoms(y, x, flavor):
    """J correspondences with a single sheet on a single component."""
    out = []
    comps = y.components()
    for k, comp in enumerate(comps):
        for s in sheet_maps(y, x, comp, flavor):
            sheets = [[] for _ in comps]
            sheets[k] = [dict(zip(comp, s))]
            out.append(K.Correspondence(y, x, flavor, sheets))
    return out
