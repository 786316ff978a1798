"""Command line front end: read a JSON spec document, run one command, print a report.

Exit codes: 0 success, 2 schema or input error, 3 budget exceeded,
4 certification false (``certify`` only), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

import jsonschema
import numpy as np

from . import codes as C
from . import expansion as E
from . import extendability as X
from . import homology as Hm
from . import posets as P
from . import sheaves as S
from .errors import BudgetExceeded, HierarchyError
from .fields import get_field
from .groups import PermutationAction, cyclic_group

SCHEMA_VERSION = 1

EXIT_OK, EXIT_ERROR, EXIT_SCHEMA, EXIT_BUDGET, EXIT_NOT_ME = 0, 1, 2, 3, 4

COMMANDS = ("params", "extend", "family", "sample-me", "certify", "cohomology",
            "css", "expansion", "quotient", "product")

_label = {}  # any JSON value; lists become tuples
_rows = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

_code = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "index": {"type": "array"},
        "generator": _rows,
        "parity": _rows,
    },
}

_field = {
    "type": "object",
    "additionalProperties": False,
    "required": ["p"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "t": {"type": "integer", "minimum": 1},
        "modulus": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

_poset = {
    "type": "object",
    "additionalProperties": False,
    "required": ["constructor"],
    "properties": {
        "constructor": {"enum": ["default_space", "torus", "cycle", "chain", "graph",
                                 "simplicial_complex", "multipartite_flag", "a1_flag", "hasse"]},
        "n": {"type": "integer", "minimum": 1},
        "l": {"type": "integer", "minimum": 2},
        "q": {"type": "integer", "minimum": 2},
        "points": {"type": "array"},
        "parts": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "vertices": {"type": "array"},
        "edges": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "facets": {"type": "array", "items": {"type": "array"}},
        "empty_face": {"type": "boolean"},
        "elements": {"type": "array"},
        "covers": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "grading": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
    },
}

_located_code = {
    "type": "object",
    "additionalProperties": False,
    "required": ["element", "code"],
    "properties": {"element": _label, "code": _code},
}

_sheaf = {
    "type": "object",
    "additionalProperties": False,
    "required": ["type"],
    "properties": {
        "type": {"enum": ["constant", "zero", "default", "tanner", "explicit",
                          "flag_product", "generic"]},
        "code": _code,
        "codes": {"type": "array", "items": _code},
        "level1": {"type": "array", "items": _located_code},
        "local": {"type": "array", "items": _located_code},
        "ns": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "ks": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "trials": {"type": "integer", "minimum": 1},
        "mode": {"enum": ["probabilistic", "exact"]},
    },
}

_sub_doc = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"field": _field, "poset": _poset, "sheaf": _sheaf},
    "required": ["sheaf"],
}

_options = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "open_set": {"type": "array"},
        "cap": {"type": "integer", "minimum": 1},
        "samples": {"type": "integer", "minimum": 1},
        "field_bits": {"type": "integer", "minimum": 1},
        "candidate": _sub_doc,
        "other": _sub_doc,
        "action": {
            "type": "object",
            "additionalProperties": False,
            "required": ["generators"],
            "properties": {"generators": {"type": "array", "items": {
                "type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}}}},
        },
        "css": {
            "type": "object",
            "additionalProperties": False,
            "required": ["construction"],
            "properties": {
                "construction": {"enum": ["cohomology", "hp", "lp", "gb", "tanner_color"]},
                "A": {"type": "array"},
                "B": {"type": "array"},
                "a": {"type": "object"},
                "b": {"type": "object"},
                "group_order": {"type": "integer", "minimum": 1},
                "transpose_b": {"type": "boolean"},
            },
        },
    },
}

SPEC_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["sheaf"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "field": _field,
        "poset": _poset,
        "sheaf": _sheaf,
        "options": _options,
        "seed": {"type": "integer", "minimum": 0},
    },
}


class SpecError(ValueError):
    """The input document is malformed or describes an invalid object."""


def validate_spec(doc):
    try:
        jsonschema.validate(doc, SPEC_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SpecError(f"{where}: {e.message}") from None


def _need(d, *keys, what="poset"):
    for k in keys:
        if k not in d:
            raise SpecError(f"{what} '{d.get('constructor', d.get('type'))}' needs '{k}'")


# --- building objects from spec sections -------------------------------------

def build_field(d):
    if d is None:
        return get_field(2, 1)
    mod = tuple(d["modulus"]) if "modulus" in d else None
    return get_field(d["p"], d.get("t", 1), mod)


def build_poset(d):
    """Returns (poset, flag triple or None)."""
    c = d["constructor"]
    lab = P.label_from_json
    if c == "default_space":
        if "points" in d:
            return P.default_space([lab(x) for x in d["points"]]), None
        _need(d, "n")
        return P.default_space(range(d["n"])), None
    if c == "torus":
        _need(d, "l")
        return P.torus(d["l"]), None
    if c == "cycle":
        _need(d, "l")
        return P.cycle_poset(d["l"]), None
    if c == "chain":
        _need(d, "n")
        return P.chain(d["n"]), None
    if c == "graph":
        _need(d, "vertices", "edges")
        return P.graph_complex([lab(v) for v in d["vertices"]],
                               [tuple(lab(x) for x in e) for e in d["edges"]],
                               d.get("empty_face", False)), None
    if c == "simplicial_complex":
        _need(d, "facets")
        return P.simplicial_complex([tuple(lab(x) for x in f) for f in d["facets"]],
                                    d.get("empty_face", False)), None
    if c == "multipartite_flag":
        _need(d, "parts")
        return P.complete_multipartite_flag(*d["parts"]), None
    if c == "a1_flag":
        _need(d, "q")
        flag = P.a1_flag_complex(d["q"])
        return flag[0], flag
    _need(d, "elements", "covers", "grading")
    return P.GradedPoset.from_dict({k: d[k] for k in ("elements", "covers", "grading")}), None


def build_code(field, d, index):
    if "index" in d:
        index = [P.label_from_json(x) for x in d["index"]]
    index = list(index)
    if ("generator" in d) == ("parity" in d):
        raise SpecError("a code needs exactly one of 'generator' or 'parity'")
    M = np.array(d.get("generator", d.get("parity")), dtype=np.int64).reshape(-1, len(index))
    if M.size and M.max() >= field.q:
        raise SpecError(f"code entries outside {field}")
    if "generator" in d:
        return C.LinearCode(field, index, G=M)
    return C.LinearCode(field, index, H=M)


def build_sheaf(doc):
    """Returns (sheaf, field, flag); a generic sheaf has field None."""
    sd = doc["sheaf"]
    kind = sd["type"]
    if kind == "generic":
        _need(sd, "ns", "ks", what="sheaf")
        p = doc.get("field", {}).get("p", 2)
        kw = {"trials": sd["trials"]} if "trials" in sd else {}
        kw["seed"] = doc.get("seed", 0)
        return X.generic_tensor_code(sd["ns"], sd["ks"], p, **kw), None, None
    field = build_field(doc.get("field"))
    if "poset" not in doc:
        raise SpecError(f"sheaf '{kind}' needs a 'poset' section")
    Xp, flag = build_poset(doc["poset"])
    lab = P.label_from_json
    if kind == "constant":
        return S.constant_sheaf(Xp, field), field, flag
    if kind == "zero":
        return S.zero_sheaf(Xp, field), field, flag
    if kind == "default":
        _need(sd, "code", what="sheaf")
        bottom = [s for s in Xp.elements if s not in Xp.maximal and not Xp.lower_covers(s)]
        if len(bottom) != 1:
            raise SpecError("default sheaf needs a poset with a single bottom element")
        return S.default_sheaf(Xp, build_code(field, sd["code"], Xp.X(bottom[0]))), field, flag
    if kind == "tanner":
        _need(sd, "level1", what="sheaf")
        lv = {}
        for item in sd["level1"]:
            s = lab(item["element"])
            if s not in Xp.elements:
                raise SpecError(f"unknown element {item['element']!r}")
            lv[s] = build_code(field, item["code"], Xp.X(s))
        return S.tanner_completion(Xp, lv, field), field, flag
    if kind == "explicit":
        _need(sd, "local", what="sheaf")
        local = {s: C.full_code(field, Xp.X(s)) for s in Xp.elements}
        for item in sd["local"]:
            s = lab(item["element"])
            if s not in Xp.elements:
                raise SpecError(f"unknown element {item['element']!r}")
            local[s] = build_code(field, item["code"], Xp.X(s))
        return S.SheafCode(Xp, field, local), field, flag
    _need(sd, "codes", what="sheaf")
    if flag is None:
        raise SpecError("flag_product needs a flag complex poset (a1_flag)")
    codes = [build_code(field, cd, lv) for cd, lv in zip(sd["codes"], flag[1])]
    return S.flag_product_code(flag, codes), field, flag


# --- report helpers -----------------------------------------------------------

def _num(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, P.OpenSet):
        return [P.label_to_json(s) for s in x.sorted()]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (float, Fraction, np.integer, int)):
        return _num(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _code_params(code, budget):
    d = C.min_distance(code, budget) if budget is None or code.field.q ** code.k <= budget else None
    return {"n": code.n, "k": code.k, "d": _num(d)}


def _budget(args, default):
    return args.budget if args.budget is not None else default


def _open_set(Xp, members):
    mem = [P.label_from_json(x) for x in members]
    unknown = [m for m in mem if m not in Xp.elements]
    if unknown:
        raise SpecError(f"unknown open-set element {unknown[0]!r}")
    if not Xp.is_upper(mem):
        raise SpecError("open_set is not an upper set")
    return P.OpenSet(Xp, mem)


def _require_concrete(F, cmd):
    if isinstance(F, X.GenericSheafCode):
        raise SpecError(f"'{cmd}' needs a concrete sheaf, not a generic one")


def _require_generic(F, cmd):
    if not isinstance(F, X.GenericSheafCode):
        raise SpecError(f"'{cmd}' needs a generic sheaf (type 'generic')")


# --- commands -----------------------------------------------------------------

def cmd_params(doc, F, args):
    if isinstance(F, X.GenericSheafCode):
        return {"n": len(F.X.maximal), "k": F.dim(args.mode), "mode": args.mode,
                "trials": F.trials, "seed": F.seed}
    return _code_params(F.global_code(), _budget(args, C.DISTANCE_BUDGET))


def cmd_extend(doc, F, args):
    opts = doc.get("options", {})
    if "open_set" not in opts:
        raise SpecError("extend needs options.open_set")
    U = _open_set(F.X, opts["open_set"])
    return X.is_extendable(F, U, args.mode).to_dict()


def cmd_family(doc, F, args):
    cap = doc.get("options", {}).get("cap", X.OPEN_SET_CAP)
    fam = X.extendable_family(F, cap, args.mode)
    return {"count": len(fam), "open_sets": [_jsonable(U) for U in fam],
            "total_open_sets": P.count_open_sets(F.X),
            "mode": args.mode if isinstance(F, X.GenericSheafCode) else "exact"}


def cmd_sample_me(doc, F, args):
    _require_generic(F, "sample-me")
    opts = doc.get("options", {})
    t = opts.get("field_bits", 8)
    n = opts.get("samples", 1)
    cap = opts.get("cap", X.OPEN_SET_CAP)
    rows = []
    for j in range(n):
        sample = X.sample_instance(F, t, args.seed + j, mode=args.mode)
        ok, rep = X.me_certify(F, sample, cap, args.mode)
        rows.append({"seed": args.seed + j, "proper": rep["proper"], "certified": ok,
                     "point": sample.point, "witness": _jsonable(rep.get("witness"))})
    field = get_field(F.p, t)
    return {"field": field.to_dict(), "samples": rows,
            "proper": sum(r["proper"] for r in rows),
            "certified": sum(r["certified"] for r in rows),
            "q_bound": F.q_bound(), "failure_bound": _num(Fraction(F.q_bound(), field.q)),
            "mode": args.mode, "trials": F.trials, "rank_seed": F.seed}


def cmd_certify(doc, F, args):
    _require_generic(F, "certify")
    opts = doc.get("options", {})
    cap = opts.get("cap", X.OPEN_SET_CAP)
    if "candidate" in opts:
        cd = dict(opts["candidate"])
        cd.setdefault("poset", None)
        if cd["poset"] is None:
            cd.pop("poset")
            sub = {"field": cd.get("field"), "sheaf": cd["sheaf"]}
            inst = _candidate_on(F.X, sub)
        else:
            inst, _, _ = build_sheaf(cd)
        ok, rep = X.me_certify(F, inst, cap, args.mode)
        point = None
    else:
        t = opts.get("field_bits", 8)
        sample = X.sample_instance(F, t, args.seed, mode=args.mode)
        inst = sample.instance
        ok, rep = X.me_certify(F, sample, cap, args.mode)
        point = sample.point
    out = {"me": ok, "report": _jsonable(rep), "field": inst.field.to_dict()}
    if point is not None:
        out["point"] = point
    bottoms = [s for s in F.X.elements if s not in F.X.maximal]
    if len(bottoms) == 1 and len(F.X.grades()) == 2:
        out["mds"] = C.is_mds(inst.global_code())
    return out


def _candidate_on(Xp, sub):
    """Build a concrete candidate sheaf on the generic code's own poset."""
    field = build_field(sub.get("field"))
    sd = sub["sheaf"]
    if sd["type"] == "default":
        bottom = [s for s in Xp.elements if s not in Xp.maximal and not Xp.lower_covers(s)]
        if len(bottom) != 1 or "code" not in sd:
            raise SpecError("default candidate needs a default space and a code")
        return S.default_sheaf(Xp, build_code(field, sd["code"], Xp.X(bottom[0])))
    if sd["type"] == "explicit":
        local = {s: C.full_code(field, Xp.X(s)) for s in Xp.elements}
        for item in sd.get("local", []):
            s = P.label_from_json(item["element"])
            local[s] = build_code(field, item["code"], Xp.X(s))
        return S.SheafCode(Xp, field, local)
    if sd["type"] == "tanner":
        lv = {P.label_from_json(i["element"]): build_code(field, i["code"],
                                                          Xp.X(P.label_from_json(i["element"])))
              for i in sd.get("level1", [])}
        return S.tanner_completion(Xp, lv, field)
    raise SpecError("candidate sheaf must be of type default, explicit or tanner")


def _css_report(code, distance, budget):
    out = {"n": code.n, "k": code.k}
    if distance:
        out.update(d_X=_num(code.d_X(budget)), d_Z=_num(code.d_Z(budget)),
                   d=_num(code.distance(budget)))
    return out


def cmd_cohomology(doc, F, args):
    _require_concrete(F, "cohomology")
    basis = "global_generator" if args.basis == "global" else "intrinsic"
    K = Hm.CochainComplex(F, basis)
    if args.degree is None:
        raise SpecError("cohomology needs --degree")
    code = Hm.css_from_cohomology(K, args.degree)
    out = _css_report(code, args.distance, _budget(args, C.DISTANCE_BUDGET))
    out.update(degree=args.degree, basis_mode=basis,
               cohomology_dims={str(i): Hm.cohomology_dim(K, i) for i in K.grades()})
    return out


def _ga_entries(rows):
    """Group-algebra matrix entries: dicts {element: coefficient} (keys may be strings)."""
    return [[{int(g): int(a) for g, a in e.items()} for e in row] for row in rows]


def _coeff_vector(G, d):
    v = [0] * G.order
    for g, c in d.items():
        if not 0 <= int(g) < G.order:
            raise SpecError(f"group element {g} outside Z_{G.order}")
        v[int(g)] = int(c)
    return v


def cmd_css(doc, F, args):
    opts = doc.get("options", {}).get("css", {"construction": "cohomology"})
    kind = opts["construction"]
    budget = _budget(args, C.DISTANCE_BUDGET)
    if kind == "cohomology":
        _require_concrete(F, "css")
        if args.degree is None:
            raise SpecError("css with construction 'cohomology' needs --degree")
        code = Hm.css_from_cohomology(Hm.CochainComplex(F), args.degree)
    elif kind == "tanner_color":
        _require_concrete(F, "css")
        code = Hm.tanner_color_code(F)
    else:
        field = build_field(doc.get("field"))
        if kind == "hp":
            _need(opts, "A", "B", what="css")
            A = C.Matrix(field, np.array(opts["A"], dtype=np.int64))
            B = C.Matrix(field, np.array(opts["B"], dtype=np.int64))
            code = C.hp_code(A, B, opts.get("transpose_b", False))
        else:
            _need(opts, "group_order", what="css")
            G = cyclic_group(opts["group_order"])
            if kind == "gb":
                _need(opts, "a", "b", what="css")
                code = C.gb_code(G, field, _coeff_vector(G, opts["a"]), _coeff_vector(G, opts["b"]))
            else:
                _need(opts, "A", "B", what="css")
                A = C.GroupAlgebraMatrix.from_entries(G, field, _ga_entries(opts["A"]))
                B = C.GroupAlgebraMatrix.from_entries(G, field, _ga_entries(opts["B"]))
                code = C.lp_code(A, B, opts.get("transpose_b", False))
    out = _css_report(code, True, budget)
    out["construction"] = kind
    return out


def cmd_expansion(doc, F, args):
    _require_concrete(F, "expansion")
    budget = _budget(args, E.EXPANSION_BUDGET)
    K = Hm.CochainComplex(F)
    small = Fraction(args.small_set) if args.small_set is not None else None
    if args.degree is not None:
        res = {args.degree: E.eta(K, args.degree, args.normalized, small, budget, args.jobs)}
    else:
        if small is not None:
            res = {i: E.eta(K, i, args.normalized, small, budget, args.jobs)
                   for i in E.expansion_degrees(F.X)}
        else:
            res = E.eta_all(K, args.normalized, budget, args.jobs)
    vals = [r.value for r in res.values()]
    out = {"degrees": {str(i): r.to_dict() for i, r in res.items()},
           "min": _num(min(vals, default=math.inf)), "normalized": args.normalized,
           "empty_face": () in F.X.elements}
    if args.two_way:
        if args.threshold is None:
            raise SpecError("--two-way needs --threshold")
        out["two_way"] = E.two_way_check(F, Fraction(args.threshold), args.normalized, budget)
        out["threshold"] = _num(Fraction(args.threshold))
    return out


def cmd_quotient(doc, F, args):
    _require_concrete(F, "quotient")
    act = doc.get("options", {}).get("action")
    if act is None:
        raise SpecError("quotient needs options.action")
    gens = []
    for g in act["generators"]:
        perm = {s: s for s in F.X.elements}
        for a, b in g:
            a, b = P.label_from_json(a), P.label_from_json(b)
            if a not in perm or b not in perm:
                raise SpecError(f"action moves unknown element {a!r} or {b!r}")
            perm[a] = b
        gens.append(perm)
    action = PermutationAction(F.X.elements, gens)
    Q, proj = S.quotient_sheaf(F, action)
    budget = _budget(args, C.DISTANCE_BUDGET)
    out = {"group_order": action.order, "orbits": len(Q.X.elements),
           "quotient": _code_params(Q.global_code(), budget),
           "original": _code_params(F.global_code(), budget)}
    return out


def cmd_product(doc, F, args):
    _require_concrete(F, "product")
    other = doc.get("options", {}).get("other")
    if other is None:
        raise SpecError("product needs options.other")
    sub = dict(other)
    sub.setdefault("field", doc.get("field"))
    if sub["field"] is None:
        sub.pop("field")
    G, _, _ = build_sheaf(sub)
    _require_concrete(G, "product")
    PF = S.product_sheaf(F, G)
    budget = _budget(args, C.DISTANCE_BUDGET)
    glob = PF.global_code()
    tens = C.tensor(F.global_code(), G.global_code())
    return {"product": _code_params(glob, budget), "equals_tensor": glob == tens,
            "factors": [_code_params(F.global_code(), budget), _code_params(G.global_code(), budget)]}


HANDLERS = {
    "params": cmd_params, "extend": cmd_extend, "family": cmd_family,
    "sample-me": cmd_sample_me, "certify": cmd_certify, "cohomology": cmd_cohomology,
    "css": cmd_css, "expansion": cmd_expansion, "quotient": cmd_quotient,
    "product": cmd_product,
}


# --- entry point --------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="path to a JSON spec document ('-' for stdin)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=int, default=None, help="enumeration cap")
    common.add_argument("--mode", choices=("probabilistic", "exact"), default=None,
                        help="rank mode for generic sheaves")
    parser = argparse.ArgumentParser(prog="sheafforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("cohomology", "css", "expansion"):
            sp.add_argument("--degree", type=int, default=None)
        if name == "cohomology":
            sp.add_argument("--distance", action="store_true")
            sp.add_argument("--basis", choices=("intrinsic", "global"), default="intrinsic")
        if name == "expansion":
            sp.add_argument("--normalized", action="store_true")
            sp.add_argument("--small-set", default=None)
            sp.add_argument("--two-way", action="store_true")
            sp.add_argument("--threshold", default=None)
    return parser


def load_spec(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise SpecError(f"cannot read spec: {e}") from None


def run(command, doc, args):
    """Validate, build and dispatch; returns the report dict."""
    validate_spec(doc)
    if args.seed is None:
        args.seed = doc.get("seed", 0)
    doc = dict(doc)
    doc["seed"] = args.seed
    if args.mode is None:
        args.mode = doc["sheaf"].get("mode", "probabilistic")
    try:
        F, _, _ = build_sheaf(doc)
    except (HierarchyError, KeyError) as e:
        raise SpecError(str(e)) from None
    results = HANDLERS[command](doc, F, args)
    return {"schema": SCHEMA_VERSION, "command": command, "inputs": doc,
            "results": _jsonable(results),
            "meta": {"seed": args.seed, "budget": args.budget, "jobs": args.jobs,
                     "mode": args.mode}}


def _text(report, wall):
    lines = [f"command: {report['command']}"]

    def walk(prefix, x):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(f"{prefix}{k}.", x[k])
        else:
            lines.append(f"  {prefix[:-1]:<32} {json.dumps(x)}")

    walk("", report["results"])
    walk("meta.", report["meta"])
    lines.append(f"  {'wall_time_s':<32} {wall:.3f}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        doc = load_spec(args.spec)
        report = run(args.command, doc, args)
    except SpecError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    wall = time.perf_counter() - t0
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(_text(report, wall))
    if args.command == "certify" and not report["results"]["me"]:
        return EXIT_NOT_ME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
