"""JSON file formats: surfaces, sequences, fans and reduction certificates."""
import json
import re
from fractions import Fraction

from .classes import NumClass
from .gale import ToricFan, cone_records, winding_number
from .lattice import IntersectionLattice, make_blowup_p2, make_hirzebruch, validate_lattice
from .linalg import det2
from .mutation import MutationStep
from .toric_geometry import k_squared


class ParseError(ValueError):
    pass


class DomainError(ValueError):
    pass


def dumps(obj):
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s):
    try:
        return Fraction(s)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def _int_list(x, what):
    if not isinstance(x, list):
        raise ParseError(f"{what} must be a list")
    return [_int(a, what) for a in x]


def _get(d, key):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing field {key!r}")
    return d[key]


def parse_surface(d):
    model = _get(d, "model")
    if model == "blowup_p2":
        k = _int(_get(d, "points"), "points")
        if k < 0:
            raise ParseError("points must be nonnegative")
        L = make_blowup_p2(k)
    elif model == "hirzebruch":
        a = _int(_get(d, "a"), "a")
        if a < 0:
            raise ParseError("a must be nonnegative")
        L = make_hirzebruch(a)
    elif model == "custom":
        gram = _get(d, "gram")
        if not isinstance(gram, list) or not gram:
            raise ParseError("gram must be a nonempty list of rows")
        gram = [_int_list(r, "gram") for r in gram]
        K = _int_list(_get(d, "K"), "K")
        try:
            L = IntersectionLattice(tuple(map(tuple, gram)), tuple(K))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    else:
        raise ParseError(f"unknown surface model {model!r}")
    rep = validate_lattice(L)
    if not rep["ok"]:
        raise DomainError(f"lattice fails validation: {rep['checks']}")
    return L


def surface_to_json(L):
    m = re.fullmatch(r"(blowup_p2|hirzebruch)\((\d+)\)", L.name)
    if m and m.group(1) == "blowup_p2":
        return {"model": "blowup_p2", "points": int(m.group(2))}
    if m:
        return {"model": "hirzebruch", "a": int(m.group(2))}
    return {"model": "custom", "gram": [list(r) for r in L.gram], "K": list(L.K)}


def parse_sequence(d):
    L = parse_surface(_get(d, "surface"))
    objs = _get(d, "objects")
    if not isinstance(objs, list) or not objs:
        raise ParseError("objects must be a nonempty list")
    out = []
    for o in objs:
        c1 = _int_list(_get(o, "c1"), "c1")
        if len(c1) != L.rho:
            raise ParseError(f"c1 has length {len(c1)}, lattice rank is {L.rho}")
        out.append(NumClass(_int(_get(o, "rank"), "rank"), c1, _int(_get(o, "c2"), "c2"), L))
    return out


def class_to_json(N):
    return {"rank": N.e, "c1": list(N.c1), "c2": N.c2}


def sequence_to_json(seq):
    return {"surface": surface_to_json(seq[0].L), "objects": [class_to_json(N) for N in seq]}


def fan_to_json(fan):
    return {
        "rays": [list(r) for r in fan.rays],
        "multiplicities": list(fan.multiplicities),
        "ranks": list(fan.ranks),
        "cones": cone_records(fan),
        "winding": fan.winding,
        "K2": rat(k_squared(fan.rays)),
    }


def parse_fan(d):
    rays = _get(d, "rays")
    if not isinstance(rays, list) or len(rays) < 3:
        raise ParseError("rays must be a list of at least three pairs")
    rays = tuple(tuple(_int_list(r, "ray")) for r in rays)
    if any(len(r) != 2 for r in rays):
        raise ParseError("rays must be integer pairs")
    mult = tuple(_int_list(d.get("multiplicities", [1] * len(rays)), "multiplicities"))
    ranks = tuple(_int_list(d.get("ranks", []), "ranks"))
    vols = tuple(det2(rays[i], rays[(i + 1) % len(rays)]) for i in range(len(rays)))
    try:
        w = winding_number(rays)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    return ToricFan(rays, mult, ranks, (), vols, w)


def ts_summary(ts, rts=None):
    out = {
        "ranks": list(ts.ranks),
        "A": [[rat(x) for x in A] for A in ts.As],
        "E": [list(E) for E in ts.Es],
        "phi": [p + 1 for p in ts.phi],
    }
    if rts is not None:
        out["A_tilde"] = [[rat(x) for x in A] for A in rts.Atildes]
    return out


def certificate_to_json(cert, partial=False):
    out = {
        "initial": sequence_to_json(cert.initial),
        "steps": [s.as_dict() for s in cert.steps],
        "final": sequence_to_json(cert.final) if cert.final else None,
        "normalized": sequence_to_json(cert.normalized) if cert.normalized else None,
        "tag": cert.tag,
        "partial": partial,
        "replay": "apply the steps in order to 'initial': position p, direction left "
                  "replaces (E_p, E_{p+1}) by (L_E F, E); right by (F, R_F E)",
    }
    out["log"] = [{k: (rat(v) if isinstance(v, Fraction) else v) for k, v in e.items()}
                  for e in cert.log]
    return out


def parse_steps(lst):
    return [MutationStep(_int(_get(s, "position"), "position"), _get(s, "direction"))
            for s in lst]


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
