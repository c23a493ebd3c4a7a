"""Command-line driver: config ingestion, verification suites, expression
evaluation and machine-readable reports.

Verbs:

    verify           run the selected suites, write a JSON/text report
    eval             evaluate a mini-grammar expression symbolically
    list-identities  print every registered identity with its anchor
    dump-lattice     print the configured lattices with modes and energies

Reports are deterministic for a fixed (config, seed): entries are sorted
and the per-entry "millis" field stays null unless --timings is given
(wall-clock noise would break byte-identical reruns).  The exit status is
0 iff every selected check passed.
"""

from __future__ import annotations

import argparse
import ast
import configparser
import json
import sys
import time
from fractions import Fraction

from . import bv
from . import lie as lie_mod
from .fields import FieldPoint, ModeLattice, conjugate_field, field, \
    field_supercommutator, propagator_D, propagator_D_total
from .algebra import ABSORB, EMIT, LOWER, UPPER, GradedExpr, OpGen, \
    koszul_product, normal_order, super_bracket
from .identities import RunContext, SUITES, all_identities
from .scalars import ScalarExpr

F = Fraction


class ConfigError(Exception):
    pass


class EvalError(Exception):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"column {pos}: {msg}")
        self.pos = pos


DEFAULT_CONFIG = {
    "run": {"seed": 7, "suites": list(SUITES)},
    "theory": {"lie": "su2", "corrupt_constant": None},
    "lattice": {
        "momenta": [[0, 0, 0], [1, 0, 0], [-1, 0, 0]],
        "masses": {"scalar": 1, "fermion": 1, "dirac": 1},
        "scalar_dim": 2,
        "propagator_momenta": "cube",
    },
    "oracle": {"enabled": True, "n_max": 3, "cap": 1024},
}


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text.strip()


def load_config(path: str | None) -> dict:
    """Read an INI-style (nested tables) or JSON config file."""
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path is None:
        return cfg
    if path.endswith(".json"):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
        except OSError as exc:
            raise ConfigError(str(exc))
        for section, table in data.items():
            if section not in cfg:
                raise ConfigError(f"unknown config section {section!r}")
            if not isinstance(table, dict):
                raise ConfigError(f"section {section!r} must be a table")
            cfg[section].update(table)
        return cfg
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(str(exc))
    except OSError as exc:
        raise ConfigError(str(exc))
    for section in parser.sections():
        if section not in cfg:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            cfg[section][key] = _literal(raw)
    return cfg


def _cube():
    return [(i, j, k) for i in (-1, 0, 1) for j in (-1, 0, 1)
            for k in (-1, 0, 1)]


def context_from_config(cfg: dict) -> RunContext:
    theory_cfg = cfg["theory"]
    name = theory_cfg.get("lie", "su2")
    if isinstance(name, str):
        if name not in lie_mod.PRESETS:
            raise ConfigError(f"unknown Lie preset {name!r} "
                              f"(have {sorted(lie_mod.PRESETS)})")
        data = lie_mod.PRESETS[name]()
    else:
        data = lie_mod.LieData.from_generators(name)
    lat_cfg = cfg["lattice"]
    momenta = [tuple(F(x) for x in m) for m in lat_cfg["momenta"]]
    masses = {k: F(v) for k, v in lat_cfg["masses"].items()}
    scalar_dim = int(lat_cfg.get("scalar_dim", 2))
    lattice = ModeLattice.make(momenta, masses, scalar_dim=scalar_dim,
                               lie_dim=data.dim)
    nz = [m for m in momenta if any(x != 0 for x in m)]
    for m in nz:
        neg = tuple(-x for x in m)
        if neg not in nz:
            nz.append(neg)
    if not nz:
        raise ConfigError("lattice needs at least one nonzero momentum")
    lattice_nozero = ModeLattice.make(nz, masses, scalar_dim=scalar_dim,
                                      lie_dim=data.dim)
    pm = lat_cfg.get("propagator_momenta", "cube")
    prop_momenta = _cube() if pm == "cube" else [tuple(F(x) for x in m)
                                                 for m in pm]
    lattice_prop = ModeLattice.make(prop_momenta, masses,
                                    scalar_dim=scalar_dim, lie_dim=data.dim)
    corrupt = theory_cfg.get("corrupt_constant")
    orc_cfg = cfg["oracle"]
    return RunContext(
        lattice=lattice, lattice_nozero=lattice_nozero,
        lattice_prop=lattice_prop, lie=data,
        theory=bv.TheorySpec.make(data),
        seed=int(cfg["run"]["seed"]),
        oracle_enabled=bool(orc_cfg.get("enabled", True)),
        oracle_n_max=int(orc_cfg.get("n_max", 3)),
        oracle_cap=int(orc_cfg.get("cap", 1024)),
        corrupt_constant=tuple(corrupt) if corrupt else None)


def run_verify(cfg: dict, suites=None, timings: bool = False,
               oracle: str | None = None) -> dict:
    """Execute the selected suites and assemble the report document."""
    ctx = context_from_config(cfg)
    selected = list(suites) if suites else list(cfg["run"]["suites"])
    for s in selected:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r} (have {SUITES})")
    if oracle == "off":
        ctx.oracle_enabled = False
    elif oracle == "on":
        ctx.oracle_enabled = True
    if not ctx.oracle_enabled:
        selected = [s for s in selected if s != "oracle"]
    entries = []
    for ident in all_identities():
        if ident.suite not in selected:
            continue
        t0 = time.perf_counter()
        try:
            result = ident.run(ctx)
        except Exception as exc:  # a suite failure is reported, not thrown
            result = None
            entries.append({
                "identity": ident.name, "anchor": ident.anchor,
                "status": "error", "residual": f"{type(exc).__name__}: {exc}",
                "millis": round((time.perf_counter() - t0) * 1000.0, 3)
                if timings else None,
            })
        if result is not None:
            entries.append({
                "identity": ident.name, "anchor": ident.anchor,
                "status": result.status, "residual": result.residual,
                "millis": round((time.perf_counter() - t0) * 1000.0, 3)
                if timings else None,
            })
    entries.sort(key=lambda e: e["identity"])
    report = {
        "seed": ctx.seed,
        "suites": sorted(selected),
        "identities": entries,
        "passed": sum(1 for e in entries if e["status"] == "pass"),
        "failed": sum(1 for e in entries if e["status"] != "pass"),
    }
    return report


def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"seed {report['seed']}  suites {' '.join(report['suites'])}"]
    for e in report["identities"]:
        mark = "ok  " if e["status"] == "pass" else "FAIL"
        lines.append(f"[{mark}] {e['identity']:<36} residual {e['residual']}")
        lines.append(f"       {e['anchor']}")
    lines.append(f"passed {report['passed']}, failed {report['failed']}")
    return "\n".join(lines) + "\n"


# --- mini expression grammar -------------------------------------------------

class _Tok:
    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(src: str):
    toks = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "(),":
            toks.append(_Tok(ch, ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < len(src)
                            and src[i + 1].isdigit()):
            j = i + 1
            while j < len(src) and (src[j].isdigit() or src[j] == "/"):
                j += 1
            toks.append(_Tok("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("name", src[i:j], i))
            i = j
            continue
        raise EvalError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def next(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t.kind != kind:
            raise EvalError(f"expected {kind!r}, found {t.text or 'end'!r}",
                            t.pos)
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise EvalError(f"trailing input {t.text!r}", t.pos)
        return node

    def expr(self):
        t = self.next()
        if t.kind == "num":
            return ("num", t.text, t.pos)
        if t.kind != "name":
            raise EvalError(f"expected a name or number, found "
                            f"{t.text or 'end'!r}", t.pos)
        if self.peek().kind != "(":
            return ("name", t.text, t.pos)
        self.next()
        args = []
        if self.peek().kind != ")":
            args.append(self.expr())
            while self.peek().kind == ",":
                self.next()
                args.append(self.expr())
        self.expect(")")
        return ("call", t.text, t.pos, args)


_INDEX_NAMES = {"I": 0, "J": 1, "H": 2, "a": 0, "b": 1, "c": 2, "alpha": 0,
                "beta": 1}
_POINTS = {"x": ("t", "x"), "y": ("t2", "y"), "z": ("t3", "z")}
_MODES = {"p": 0, "q": 1, "r": 2}


class Evaluator:
    """Evaluate mini-grammar expressions against the configured context."""

    def __init__(self, ctx: RunContext):
        self.ctx = ctx

    def point(self, node):
        kind, text, pos = node[:3]
        if kind == "name" and text in _POINTS:
            return FieldPoint.make(*_POINTS[text])
        raise EvalError(f"expected a point name (x, y, z), found {text!r}", pos)

    def index(self, node):
        kind, text, pos = node[:3]
        if kind == "num":
            return int(Fraction(text))
        if kind == "name" and text in _INDEX_NAMES:
            return _INDEX_NAMES[text]
        raise EvalError(f"expected an index, found {text!r}", pos)

    def mode(self, node):
        kind, text, pos = node[:3]
        if kind == "num":
            mid = int(Fraction(text))
        elif kind == "name" and text in _MODES:
            mid = _MODES[text]
        else:
            raise EvalError(f"expected a mode (p, q, r or a number), "
                            f"found {text!r}", pos)
        if mid >= len(self.ctx.lattice.modes):
            raise EvalError(f"mode {mid} is outside the lattice", pos)
        return self.ctx.lattice.modes[mid]

    def sector(self, node):
        kind, text, pos = node[:3]
        if kind == "name" and text in ("scalar", "fermion", "dirac", "ghost",
                                       "gauge"):
            return text
        raise EvalError(f"unknown sector {text!r}", pos)

    def eval(self, node):
        kind = node[0]
        if kind == "num":
            return ScalarExpr.rational(Fraction(node[1]))
        if kind == "name":
            raise EvalError(f"unknown identifier {node[1]!r}", node[2])
        _, fname, pos, args = node

        def need(n):
            if len(args) != n:
                raise EvalError(
                    f"{fname} takes {n} argument(s), got {len(args)}", pos)

        lat = self.ctx.lattice_nozero
        if fname == "field":
            need(3)
            sec = self.sector(args[0])
            comp = (0, self.index(args[1])) if sec == "gauge" \
                else self.index(args[1])
            return field(sec, comp, self.point(args[2]), lat)
        if fname == "conj":
            need(3)
            return conjugate_field(self.sector(args[0]), self.index(args[1]),
                                   self.point(args[2]), lat)
        if fname == "deriv":
            need(2)
            f = self.eval(args[0])
            return f.deriv(self.index(args[1]))
        if fname == "scomm":
            need(2)
            a, b = self.eval(args[0]), self.eval(args[1])
            ea = a.expr if hasattr(a, "expr") else a
            eb = b.expr if hasattr(b, "expr") else b
            return super_bracket(ea, eb)
        if fname in ("absorb", "emit"):
            need(2)
            mode = self.mode(args[0])
            idx = self.index(args[1])
            species = ABSORB if fname == "absorb" else EMIT
            posn = UPPER if fname == "absorb" else LOWER
            return GradedExpr.of(OpGen(species, posn, "scalar", mode.id, (idx,)))
        if fname == "prod":
            # formal composition: reordering happens under normal(...) or
            # pprod(...) (the physical-rule product)
            need(2)
            a, b = self.eval(args[0]), self.eval(args[1])
            ea = a.expr if hasattr(a, "expr") else a
            eb = b.expr if hasattr(b, "expr") else b
            acc = {}
            for w1, c1 in ea.terms.items():
                for w2, c2 in eb.terms.items():
                    acc[w1 + w2] = acc.get(w1 + w2, ScalarExpr.zero()) + c1 * c2
            return GradedExpr(acc)
        if fname == "pprod":
            need(2)
            a, b = self.eval(args[0]), self.eval(args[1])
            ea = a.expr if hasattr(a, "expr") else a
            eb = b.expr if hasattr(b, "expr") else b
            return koszul_product(ea, eb, "physical")
        if fname == "normal":
            need(1)
            e = self.eval(args[0])
            return normal_order(e.expr if hasattr(e, "expr") else e)
        if fname == "S":
            if not args:
                raise EvalError("S needs a coordinate", pos)
            th = self.ctx.theory
            cname = args[0][1]
            idx = [self.index(a) for a in args[1:]]
            table = {
                "omega": lambda: th.omega(idx[0] if idx else 0),
                "omegabar": lambda: th.omegabar(idx[0] if idx else 0),
                "n": lambda: th.nl(idx[0] if idx else 0),
                "A": lambda: th.a_gauge(idx[0] if idx else 0,
                                        idx[1] if len(idx) > 1 else 0),
                "psi": lambda: th.psi(idx[0] if idx else 0,
                                      idx[1] if len(idx) > 1 else 0),
                "psibar": lambda: th.psibar(idx[0] if idx else 0,
                                            idx[1] if len(idx) > 1 else 0),
            }
            if cname not in table:
                raise EvalError(f"unknown coordinate {cname!r}", args[0][2])
            s = bv.brst_operator(th)
            return s(bv.FiberPoly.coord(table[cname]()))
        raise EvalError(f"unknown function {fname!r}", pos)


def _d_basis_render(value: ScalarExpr, ctx: RunContext) -> str | None:
    """Try to recognise the scalar as a known propagator combination."""
    lat = ctx.lattice_nozero
    x = FieldPoint.make(*_POINTS["x"])
    y = FieldPoint.make(*_POINTS["y"])
    xy = [(1, x), (-1, y)]
    xpy = [(1, x), (1, y)]
    for sector in ("scalar", "fermion", "ghost"):
        cands = {
            "D+(x-y) + D-(x-y)": propagator_D_total(xy, lat, sector),
            "D+(x-y) - D-(x-y)":
                propagator_D(1, xy, lat, sector) - propagator_D(-1, xy, lat, sector),
            "D+(x+y) + D-(x+y)": propagator_D_total(xpy, lat, sector),
            "D+(x+y) - D-(x+y)":
                propagator_D(1, xpy, lat, sector) - propagator_D(-1, xpy, lat, sector),
        }
        for name, cand in cands.items():
            if value == cand:
                return f"{name}   [{sector} shell]"
            if value == -cand:
                return f"-({name})   [{sector} shell]"
    return None


def eval_expr(cfg: dict, text: str) -> str:
    ctx = context_from_config(cfg)
    node = _Parser(text).parse()
    value = Evaluator(ctx).eval(node)
    if hasattr(value, "expr"):  # FieldExpr
        value = value.expr
    lines = [repr(value)]
    if isinstance(value, GradedExpr):
        sc = value.scalar_part()
        if value.operator_part().is_zero() and not sc.is_zero():
            match = _d_basis_render(sc, ctx)
            if match:
                lines.append(f"  = {match}")
    elif isinstance(value, ScalarExpr):
        match = _d_basis_render(value, ctx)
        if match:
            lines.append(f"  = {match}")
    return "\n".join(lines)


# --- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gradedqft",
        description="Verify graded free-field, BV and BRST identities on a "
                    "momentum lattice.")
    sub = ap.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="INI or JSON configuration file")
    common.add_argument("--seed", type=int, help="override the run seed")

    v = sub.add_parser("verify", parents=[common],
                       help="run verification suites")
    v.add_argument("--suite", action="append", choices=SUITES,
                   help="restrict to a suite (repeatable)")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--oracle", choices=("on", "off"), default=None)
    v.add_argument("--output", metavar="PATH", help="write the report here")
    v.add_argument("--timings", action="store_true",
                   help="record wall-clock millis (breaks byte determinism)")

    e = sub.add_parser("eval", parents=[common],
                       help="evaluate a mini-grammar expression")
    e.add_argument("expr", help="e.g. 'scomm(field(ghost,I,x), conj(ghost,J,y))'")

    sub.add_parser("list-identities", parents=[common],
                   help="print all identities and anchors")
    sub.add_parser("dump-lattice", parents=[common],
                   help="print configured lattices")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = load_config(ns.config)
        if ns.seed is not None:
            cfg["run"]["seed"] = ns.seed
        if ns.verb == "verify":
            report = run_verify(cfg, ns.suite, ns.timings, ns.oracle)
            text = render_report(report, ns.format)
            if ns.output:
                with open(ns.output, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0 if report["failed"] == 0 else 1
        if ns.verb == "eval":
            sys.stdout.write(eval_expr(cfg, ns.expr) + "\n")
            return 0
        if ns.verb == "list-identities":
            for ident in all_identities():
                sys.stdout.write(f"{ident.suite:<12} {ident.name:<36} "
                                 f"{ident.anchor}\n")
            return 0
        if ns.verb == "dump-lattice":
            ctx = context_from_config(cfg)
            for name, lat in (("base", ctx.lattice),
                              ("nozero", ctx.lattice_nozero),
                              ("propagator", ctx.lattice_prop)):
                sys.stdout.write(f"[{name}] {len(lat.modes)} modes, masses "
                                 f"{ {k: str(v) for k, v in lat.masses.items()} }\n")
                for m in lat.modes:
                    esq = lat.mass("scalar") ** 2 + sum(x * x for x in m.momentum)
                    sys.stdout.write(
                        f"  p{m.id} = {tuple(str(x) for x in m.momentum)}  "
                        f"E_scalar^2 = {esq}\n")
            return 0
    except (ConfigError, EvalError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
