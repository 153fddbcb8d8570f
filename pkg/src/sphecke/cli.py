"""Batch command-line front end.

Results go to standard output as JSON with stable key order (or aligned text
with ``--format text``); a reproducibility manifest goes to standard error on
every invocation.  Exit codes: 0 success, 2 domain error, 3 resource bound,
64 usage error.  Option values resolve as command line > SPHECKE_<NAME>
environment variable > ``--config`` JSON file > built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from . import automorphic_weights as aw
from . import modp_forms as mf
from .errors import DomainError, ParseError, ResourceBoundError, SpheckeError
from .finite_field import FiniteField
from .galois_twist import (TorusPoint, check_twist_theorem,
                           eigensystem_from_json, eigensystem_from_point,
                           point_from_eigensystem, twist_point)
from .laurent import LaurentV
from .rep_ring import (VirtualCharacter, dimension, tensor_power, sym_power,
                       weight_multiplicities)
from .root_data import builtin, from_json as datum_from_json, grlex_key
from .satake import (HeckeElement, build_satake_matrices, hecke_multiply,
                     lusztig_q_analog)

DEFAULT_SEED = 20240613
ENV_PREFIX = "SPHECKE_"
MAX_WORKERS = 8


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parallel_map(fn, items):
    """Order-preserving map over a bounded worker pool."""
    items = list(items)
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(MAX_WORKERS, len(items))) as pool:
        return list(pool.map(fn, items))


# ----- option parsing helpers ---------------------------------------------------


def _parse_weight(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise DomainError(f"cannot parse weight {text!r}",
                          precondition="well_formed_weight") from None

def _parse_weight_list(text):
    return [_parse_weight(part) for part in text.split(";") if part]


def _parse_parts(text):
    return [tuple(int(x) for x in part.split(",")) for part in text.split(";")]


def _parse_element(field, text):
    if ":" in text:
        return field([int(x) for x in text.split(":")])
    return field(int(text))


def _load_doc(text):
    """Inline JSON or @path indirection."""
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON argument: {exc}") from None


def _get_datum(name_or_path):
    if name_or_path.startswith("@") or name_or_path.lstrip().startswith("{"):
        return datum_from_json(_load_doc(name_or_path))
    return builtin(name_or_path)


def _laurent_json(c):
    return c.to_json() if isinstance(c, LaurentV) else c


def _vc_json(x):
    return {"terms": [{"weight": list(lam), "coeff": _laurent_json(x.coeffs[lam])}
                      for lam in x.support()]}


def _hecke_arg(datum, text):
    """A Hecke element from weight shorthand, inline JSON, or @file."""
    if text.startswith("@") or text.lstrip().startswith("{"):
        return HeckeElement.from_json(datum, _load_doc(text))
    return HeckeElement.basis(datum, _parse_weight(text))


def _form_arg(p, n, text):
    named = {
        "delta": lambda: mf.delta(n).reduce_mod(p),
        "e4": lambda: mf.eisenstein4(n).reduce_mod(p),
        "e6": lambda: mf.eisenstein6(n).reduce_mod(p),
        "hasse": lambda: mf.hasse(p, n),
    }
    if text in named:
        return named[text]()
    doc = _load_doc(text)
    return mf.QExpansion.from_json(doc)


# ----- output ---------------------------------------------------------------------


def _text_render(doc, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key in sorted(doc):
            val = doc[key]
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_render(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
    elif isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                lines.extend(_text_render(val, indent + 1))
                lines.append(pad + "-")
            else:
                lines.append(f"{pad}- {val}")
    else:
        lines.append(f"{pad}{doc}")
    return lines


def _emit(doc, fmt):
    if fmt == "text":
        print("\n".join(_text_render(doc)))
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))


# ----- option resolution -----------------------------------------------------------


class Options:
    """Resolves option values through the documented precedence chain and
    records everything it resolved for the manifest."""

    def __init__(self, args, config):
        self.args = args
        self.config = config or {}
        self.resolved = {}

    def get(self, name, default=None, cast=None):
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is None:
            env = os.environ.get(ENV_PREFIX + name.replace("-", "_").upper())
            if env is not None:
                value = env
            elif name in self.config:
                value = self.config[name]
            else:
                value = default
        if value is not None and cast is not None and not isinstance(value, cast):
            value = cast(value)
        self.resolved[name] = value
        return value

    def require(self, name, cast=None):
        value = self.get(name, None, cast)
        if value is None:
            raise UsageError(f"missing required option --{name}")
        return value


# ----- subcommand implementations ----------------------------------------------


def _cmd_rootdatum(opt):
    datum = _get_datum(opt.require("datum"))
    doc = datum.to_json()
    doc["positive_roots"] = [list(r) for r in datum.positive_roots]
    doc["positive_coroots"] = [list(r) for r in datum.positive_coroots]
    doc["weyl_order"] = datum.weyl.order
    return doc


def _cmd_weights(opt):
    datum = _get_datum(opt.require("datum"))
    lam = _parse_weight(opt.require("below"))
    below = datum.dominant_weights_below(lam)
    return {"below": [list(w) for w in below], "count": len(below)}


def _cmd_mult(opt):
    datum = _get_datum(opt.require("datum"))
    lam = _parse_weight(opt.require("weight"))
    table = weight_multiplicities(datum, lam)
    mults = [{"weight": list(mu), "mult": m}
             for mu, m in sorted(table.mults.items(),
                                 key=lambda kv: grlex_key(kv[0]), reverse=True)]
    return {"highest": list(lam), "mults": mults,
            "dimension": dimension(datum, lam)}


def _cmd_tensor(opt):
    datum = _get_datum(opt.require("datum"))
    lam = _parse_weight(opt.require("weight"))
    power = opt.get("power", 1, int)
    mode = opt.get("mode", "tensor")
    base = VirtualCharacter.irreducible(datum, lam)
    if mode == "sym":
        out = sym_power(base, power)
    elif mode == "tensor":
        out = tensor_power(base, power)
    else:
        raise DomainError("mode must be 'tensor' or 'sym'", precondition="known_mode")
    return _vc_json(out)


def _cmd_satake(opt):
    datum = _get_datum(opt.require("datum"))
    h = _hecke_arg(datum, opt.require("element"))
    matrices = build_satake_matrices(datum, h.support())
    return _vc_json(matrices.satake(h))


def _cmd_satake_inv(opt):
    datum = _get_datum(opt.require("datum"))
    doc = opt.require("char")
    if doc.startswith("@") or doc.lstrip().startswith("{"):
        x = VirtualCharacter.from_json(datum, _load_doc(doc))
    else:
        x = VirtualCharacter.irreducible(datum, _parse_weight(doc))
    matrices = build_satake_matrices(datum, x.support())
    out = matrices.satake_inverse(x)
    return out.to_json()


def _cmd_hecke_mul(opt):
    datum = _get_datum(opt.require("datum"))
    left = _hecke_arg(datum, opt.require("left"))
    right = _hecke_arg(datum, opt.require("right"))
    return hecke_multiply(left, right).to_json()


def _cmd_kl_poly(opt):
    datum = _get_datum(opt.require("datum"))
    top = _parse_weight(opt.require("top"))
    bottom = _parse_weight(opt.require("bottom"))
    poly = lusztig_q_analog(datum, top, bottom)
    return {"top": list(top), "bottom": list(bottom),
            "q_coeffs": [{"q": e, "c": c}
                         for e, c in sorted(poly.as_q_dict().items())]}


def _param_field(opt):
    p = opt.require("p", int)
    k = opt.get("ext-degree", 1, int)
    return FiniteField(p, k)


def _param_matrices(opt, datum, field):
    q = opt.require("q", int)
    sq_text = opt.get("sqrt-q", "auto")
    if sq_text == "auto":
        sqrt_q = field.sqrt(field(q))
        if sqrt_q is None:
            raise DomainError(f"{q} has no square root in F_{field.p}^{field.k}",
                              precondition="square_root_exists")
    else:
        sqrt_q = _parse_element(field, str(sq_text))
    cutoff_text = opt.get("cutoff")
    if cutoff_text:
        cutoff = _parse_weight_list(cutoff_text)
    elif datum.family and datum.family[0] == "gl":
        n = datum.family[1]
        cutoff = [(1,) * i + (0,) * (n - i) for i in range(1, n + 1)]
        cutoff.append((2,) + (0,) * (n - 1))
    elif datum.family and datum.family[0] == "gsp":
        cutoff = [(1,) * datum.rank, (2,) * datum.rank]
    else:
        raise UsageError("--cutoff is required for custom data")
    exact = build_satake_matrices(datum, cutoff)
    return exact.specialize(q, sqrt_q)


def _cmd_param(opt):
    action = opt.require("action")
    datum = _get_datum(opt.get("datum", "gl2"))
    if action == "eval":
        field = _param_field(opt)
        spec = _param_matrices(opt, datum, field)
        coords = [_parse_element(field, t)
                  for t in opt.require("coords").split(",")]
        point = TorusPoint(datum, tuple(coords))
        psi = eigensystem_from_point(point, spec)
        return psi.to_json()
    if action == "twist":
        field = _param_field(opt)
        coords = [_parse_element(field, t)
                  for t in opt.require("coords").split(",")]
        point = TorusPoint(datum, tuple(coords))
        eta = datum.character(opt.get("character", "det"))
        t_text = opt.get("t")
        t = _parse_element(field, str(t_text)) if t_text is not None \
            else field(opt.require("q", int))
        return twist_point(point, eta, t).to_json()
    if action == "recover":
        psi = eigensystem_from_json(_load_doc(opt.require("eigensystem")))
        orbit = point_from_eigensystem(psi)
        pts = sorted(orbit, key=lambda s: tuple(x.sort_key() for x in s.coords))
        return {"orbit": [pt.to_json()["coords"] for pt in pts],
                "size": len(pts)}
    if action == "check-twist":
        left = eigensystem_from_json(_load_doc(opt.require("left")))
        right = eigensystem_from_json(_load_doc(opt.require("right")))
        eta = left.datum.character(opt.get("character", "det"))
        report = check_twist_theorem(left, right, eta)
        return report.to_json()
    raise UsageError(f"unknown param action {action!r}")


def _signature_arg(opt):
    case = opt.require("case")
    places = opt.require("places")
    if case == "C":
        return aw.SignatureData("C", [int(x) for x in places.split(",")])
    pairs = []
    for part in places.split(","):
        a, b = part.split(":")
        pairs.append((int(a), int(b)))
    return aw.SignatureData("A", pairs)


def _cmd_adm(opt):
    action = opt.require("action")
    sig = _signature_arg(opt)
    if action == "check":
        kappa = aw.AutWeight(sig, _parse_parts(opt.require("weight")))
        doc = {
            "weight": [list(p) for p in kappa.parts],
            "abs": aw.abs_weight(kappa),
            "positive": aw.is_positive(kappa),
            "even": aw.is_even(kappa),
            "admissible": aw.is_admissible_characterized(kappa),
        }
        if sig.case == "A":
            doc["sum_symmetric"] = aw.is_sum_symmetric(kappa)
        if doc["admissible"]:
            doc["depth"] = aw.depth(kappa)
        return doc
    if action == "constituents":
        bound = opt.get("abs-bound", 8, int)
        records = aw.constituent_discrepancies(sig, bound)
        return {"abs_bound": bound, "discrepancies": records,
                "count": len(records)}
    if action == "shift":
        kappa = aw.AutWeight(sig, _parse_parts(opt.require("weight")))
        lam = aw.AutWeight(sig, _parse_parts(opt.require("shift-by")))
        p = opt.require("p", int)
        out = aw.weight_shift(kappa, lam, p)
        return {"shifted": [list(part) for part in out.parts],
                "abs": aw.abs_weight(out)}
    if action == "depth":
        kappa = aw.AutWeight(sig, _parse_parts(opt.require("weight")))
        return {"depth": aw.depth(kappa)}
    raise UsageError(f"unknown adm action {action!r}")


def _cmd_mf(opt):
    action = opt.require("action")
    p = opt.require("p", int)
    n = opt.get("N", 50, int)
    if action == "basis":
        k = opt.require("k", int)
        forms = mf.basis(k, p, n)
        return {"weight": k, "dimension": len(forms),
                "forms": [f.to_json() for f in forms]}
    if action == "theta":
        f = _form_arg(p, n, opt.get("form", "delta"))
        out = mf.theta(f)
        return out.to_json()
    if action == "hecke":
        ell = opt.require("ell", int)
        f = _form_arg(p, n, opt.get("form", "delta"))
        return mf.hecke_T(ell, f).to_json()
    if action == "filtration":
        f = _form_arg(p, n, opt.get("form", "delta"))
        return {"weight": f.weight, "filtration": mf.filtration(f)}
    if action == "cycle":
        iterations = opt.get("iterations", p + 1, int)
        f = _form_arg(p, n, opt.get("form", "delta"))
        cycle = mf.theta_cycle(f, iterations)
        return {"iterations": iterations, "filtrations": cycle,
                "theta_kills": not cycle}
    if action == "commcheck":
        k = opt.require("k", int)
        ells = [int(x) for x in str(opt.require("ell")).split(",")]

        def one(ell):
            forms = mf.basis(k, p, n)
            return all(mf.commutation_check(f, ell) for f in forms)

        results = _parallel_map(one, ells)
        return {"ok": all(results),
                "per_ell": [{"ell": e, "ok": r} for e, r in zip(ells, results)]}
    if action == "twistcheck":
        ells = [int(x) for x in str(opt.get("ell", "2,3,7")).split(",")]
        f = _form_arg(p, n, opt.get("form", "delta"))
        report = mf.eigen_twist_check(f, ells)
        if report["theta_kills"]:
            return {"theta_kills": True}
        return {"theta_kills": False,
                "checks": [{"ell": chk["ell"],
                            "theta_eigenvalue": chk["theta_eigenvalue"],
                            "eigenvalue_ok": chk["eigenvalue_ok"],
                            "twist": chk["twist"].to_json()}
                           for chk in report["checks"]]}
    raise UsageError(f"unknown mf action {action!r}")


def _cmd_selftest(opt):
    from .acceptance import run_all

    seed = opt.get("seed", DEFAULT_SEED, int)
    results = run_all(seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = sum(r.ok for r in results)
    return {"criteria": [r.to_json() for r in results],
            "passed": passed, "failed": len(results) - passed}


_COMMANDS = {
    "rootdatum": _cmd_rootdatum,
    "weights": _cmd_weights,
    "mult": _cmd_mult,
    "tensor": _cmd_tensor,
    "satake": _cmd_satake,
    "satake-inv": _cmd_satake_inv,
    "hecke-mul": _cmd_hecke_mul,
    "kl-poly": _cmd_kl_poly,
    "param": _cmd_param,
    "adm": _cmd_adm,
    "mf": _cmd_mf,
    "selftest": _cmd_selftest,
}


def _build_parser():
    parser = Parser(prog="sphecke", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def add(name, helptext, *specs, action_choices=None):
        sp = sub.add_parser(name, help=helptext, add_help=True)
        if action_choices:
            sp.add_argument("action", choices=action_choices)
        for spec in specs:
            sp.add_argument(f"--{spec}")
        sp.add_argument("--format", choices=("json", "text"))
        sp.add_argument("--config")
        sp.add_argument("--seed")
        return sp

    add("rootdatum", "inspect a root datum", "datum")
    add("weights", "dominant weights below a given one", "datum", "below")
    add("mult", "weight multiplicities and dimension", "datum", "weight")
    add("tensor", "tensor / symmetric power decomposition",
        "datum", "weight", "power", "mode")
    add("satake", "transform of a Hecke element", "datum", "element")
    add("satake-inv", "inverse transform of a character", "datum", "char")
    add("hecke-mul", "convolution product", "datum", "left", "right")
    add("kl-poly", "Lusztig q-analog of a weight multiplicity",
        "datum", "top", "bottom")
    add("param", "Satake parameters over finite fields",
        "datum", "p", "ext-degree", "q", "sqrt-q", "coords",
        "character", "t", "cutoff", "eigensystem", "left", "right",
        action_choices=("eval", "twist", "recover", "check-twist"))
    add("adm", "automorphic weight admissibility",
        "case", "places", "weight", "shift-by", "p", "abs-bound",
        action_choices=("check", "constituents", "shift", "depth"))
    add("mf", "level-one mod-p modular forms",
        "p", "k", "N", "ell", "form", "iterations",
        action_choices=("basis", "theta", "hecke", "filtration", "cycle",
                        "commcheck", "twistcheck"))
    add("selftest", "run the acceptance suite")
    return parser


def dispatch(argv):
    """Run one invocation; returns the process exit code."""
    parser = _build_parser()
    start = time.time()
    manifest = {"argv": list(argv), "version": __version__, "command": None,
                "config": {}, "seed": None}
    code = 0
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 64
        manifest["command"] = args.command
        config = {}
        if getattr(args, "config", None):
            config = _load_doc("@" + args.config)
            if not isinstance(config, dict):
                raise ParseError("config file must hold a JSON object",
                                 field="<config>")
        opt = Options(args, config)
        manifest["seed"] = opt.get("seed", DEFAULT_SEED, int)
        fmt = opt.get("format", "json")
        result = _COMMANDS[args.command](opt)
        manifest["config"] = {k: v for k, v in sorted(opt.resolved.items())
                              if v is not None}
        _emit(result, fmt)
        if args.command == "selftest" and result["failed"]:
            code = 1
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(str(exc), file=sys.stderr)
        code = 64
    except ResourceBoundError as exc:
        _emit({"error": str(exc), "kind": "resource"}, "json")
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        code = 3
    except DomainError as exc:
        _emit({"error": str(exc), "precondition": exc.precondition}, "json")
        print(f"domain error [{exc.precondition}]: {exc}", file=sys.stderr)
        code = 2
    except SpheckeError as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, "json")
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        code = 70
    finally:
        manifest["wall_time_s"] = round(time.time() - start, 4)
        print(json.dumps({"manifest": manifest}, sort_keys=True),
              file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
