"""Independent checks for the certificates the normalizers emit.

Nothing in this module calls the normalization engines.  Defect arithmetic
is integer work, value witnesses go through the subgroup solver, and
residue witnesses are decided by a self-contained solvability test over
the residue function field.  Reports replay through the same public ring
arithmetic the engines used, so a certificate stands or falls on its own.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import laurent
from .coeff import CoeffRing
from .errors import (FundamentalInequalityViolated, NotAPPower, NotDivisible,
                     UnsupportedRank)
from .fields import Poly, RatFunc, poly_pth_root
from .laurent import LaurentRing
from .units import high_level_bound
from .values import SubgroupSpec, Value, quotient_index, subgroup_membership


# ---------------------------------------------------------------------------
# defect arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DefectValue:
    """The defect p^nu of a finite extension with unique valuation lift."""
    nu: int
    value: int


@dataclass
class ExtensionData:
    """Degree and local (e_i, f_i) data of the extensions of a valuation."""
    degree: int
    local: list
    p: int


def defect(n: int, e: int, f: int, p: int) -> DefectValue:
    """n/(e*f) checked to be a power of p.

    The quotient measures how far the single-extension bound is from being
    attained; for henselian base fields it is always a p-power.
    """
    if n % (e * f):
        raise NotDivisible(f"e*f = {e * f} does not divide n = {n}")
    d = n // (e * f)
    nu = 0
    m = d
    while m % p == 0:
        m //= p
        nu += 1
    if m != 1:
        raise NotAPPower(f"defect {d} is not a power of {p}")
    return DefectValue(nu, d)


def check_fundamental_inequality(data: ExtensionData) -> dict:
    """n >= sum e_i f_i; slack 0 is the defectless case."""
    total = sum(e * f for e, f in data.local)
    slack = data.degree - total
    if slack < 0:
        raise FundamentalInequalityViolated(
            f"sum e_i f_i = {total} exceeds the degree {data.degree}")
    return {"holds": True, "slack": slack}


# ---------------------------------------------------------------------------
# value-coset witnesses
# ---------------------------------------------------------------------------

def verify_value_witness(w: Value, group: SubgroupSpec, p: int) -> bool:
    """w generates a degree-p value-group extension of `group`.

    True iff w lies outside the group while p*w lies inside; for a
    degree-p extension that forces e = p, f = 1 and defect 1.
    """
    if subgroup_membership(w, group) is not None:
        return False
    return subgroup_membership(w.scaled(p), group) is not None


# ---------------------------------------------------------------------------
# residue-field witnesses
# ---------------------------------------------------------------------------

def slice_to_ratfunc(sl: dict, gf) -> RatFunc:
    """A residue slice {exponent: code} as a rational function in xbar."""
    entries = {i: c for i, c in sl.items() if c}
    if not entries:
        return RatFunc.from_poly(Poly.zero(gf))
    low = min(entries)
    shift = -low if low < 0 else 0
    dense = [0] * (max(entries) + shift + 1)
    for i, c in entries.items():
        dense[i + shift] = c
    num = Poly.make(gf, dense)
    den = Poly.monomial(gf, 1, shift)
    return RatFunc.make(num, den)


def _fq_components(gf, code: int):
    """Coordinates of a field code over the prime field."""
    return [(code // gf.p ** i) % gf.p for i in range(gf.r)]


def _solve_mod_p(p: int, columns, target):
    """One solution of the F_p linear system, or None.

    columns are coefficient vectors of the unknowns; all vectors share a
    length.  Plain Gaussian elimination; sizes here are tiny.
    """
    rows = len(target)
    ncols = len(columns)
    mat = [[col[r] % p for col in columns] + [target[r] % p]
           for r in range(rows)]
    pivots = []
    row = 0
    for col in range(ncols):
        sel = None
        for r in range(row, rows):
            if mat[r][col]:
                sel = r
                break
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        inv = pow(mat[row][col], -1, p)
        mat[row] = [(x * inv) % p for x in mat[row]]
        for r in range(rows):
            if r != row and mat[r][col]:
                fac = mat[r][col]
                mat[r] = [(x - fac * y) % p for x, y in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    for r in range(row, rows):
        if mat[r][ncols]:
            return None
    sol = [0] * ncols
    for r, col in enumerate(pivots):
        sol[col] = mat[r][ncols]
    return sol


def artin_schreier_solution(r: RatFunc):
    """A rational z with z^p - z = r, or None.

    Any solution written in lowest terms as U/V forces the denominator of
    r to be V^p, which pins V; the numerator equation U^p - V^(p-1)*U = A
    is then linear over the prime field and is solved directly.  Degrees
    of candidate U are bounded by max(deg A / p, deg V).
    """
    gf = r.num.field
    p = gf.p
    if r.is_zero():
        return RatFunc.from_poly(Poly.zero(gf))
    num, den = r.num, r.den
    v_poly = poly_pth_root(den)
    if v_poly is None:
        return None
    w = v_poly.pow(p - 1)
    dmax = max(num.degree // p, v_poly.degree)
    length = max(p * dmax, w.degree + dmax, num.degree) + 1

    def poly_vector(poly):
        out = []
        for d in range(length):
            c = poly.coeffs[d] if d < len(poly.coeffs) else 0
            out.extend(_fq_components(gf, c))
        return out

    columns = []
    basis_codes = [gf.p ** i for i in range(gf.r)]
    for j in range(dmax + 1):
        for b in basis_codes:
            image = (Poly.monomial(gf, gf.frobenius(b), p * j)
                     - w.scale(b) * Poly.monomial(gf, 1, j))
            columns.append(poly_vector(image))
    sol = _solve_mod_p(p, columns, poly_vector(num))
    if sol is None:
        return None
    dense = []
    idx = 0
    for j in range(dmax + 1):
        code = 0
        for i in range(gf.r):
            code += sol[idx] * gf.p ** i
            idx += 1
        dense.append(code)
    return RatFunc.make(Poly.make(gf, dense), v_poly)


def ratfunc_is_pth_power(r: RatFunc) -> bool:
    """Derivative test: over a perfect coefficient field, dr = 0 iff r is
    a p-th power."""
    return r.derivative().is_zero()


def verify_residue_witness(kind: str, r: RatFunc) -> bool:
    """True when the claimed residue obstruction actually obstructs.

    kind "artin-schreier": Z^p - Z - r must have no rational root, so the
    residue extension it defines is separable of degree p.
    kind "kummer": r must not be a p-th power, so the residue extension
    by r^(1/p) is purely inseparable of degree p.
    """
    if kind == "artin-schreier":
        return artin_schreier_solution(r) is None
    if kind == "kummer":
        return not ratfunc_is_pth_power(r)
    raise ValueError(f"unknown residue witness kind {kind!r}")


# ---------------------------------------------------------------------------
# purely inseparable towers
# ---------------------------------------------------------------------------

def insep_tower_data(r: int, s: int, m: int, p: int, base: SubgroupSpec):
    """Value group and residue description after adjoining p^m-th roots
    of r value-transcendental and s residue-transcendental generators.

    The value group divides each irrational-direction generator by p^m;
    the residue field gains the p^m-th roots of the s residue generators.
    The degree bookkeeping p^(m(r+s)) = index * residue-degree is replayed
    from the returned lattice.
    """
    if r > 1:
        raise UnsupportedRank(
            "only one independent irrational direction is modeled")
    if r == 1 and not any(not g.b == 0 for g in base.generators):
        raise UnsupportedRank("base group has no irrational direction")
    if r == 1:
        gens = tuple(g if g.b == 0 else g.scaled(Fraction(1, p ** m))
                     for g in base.generators)
        ve = SubgroupSpec(gens)
    else:
        ve = base
    index = quotient_index(ve, base)
    if index != p ** (m * r):
        raise UnsupportedRank(
            f"index {index} does not match p^(m*r) = {p ** (m * r)}")
    residue_gain = p ** (m * s)
    names = ", ".join(f"ybar_{i + 1}^(1/{p ** m})" for i in range(s))
    description = {
        "residue_generators": f"Kbar({names})" if names else "Kbar",
        "index": index,
        "residue_degree": residue_gain,
        "total_degree": index * residue_gain,
    }
    assert description["total_degree"] == p ** (m * (r + s))
    return ve, description


# ---------------------------------------------------------------------------
# report replay
# ---------------------------------------------------------------------------

def _jsonable_value(text):
    return Value.from_str(text) if text is not None else None


def _elem(cfg, data):
    return laurent.from_json(cfg, data)


def _same(cfg, f, g) -> bool:
    return laurent.to_json(f) == laurent.to_json(g)


def _replay_rewrite(rw, ring, failures, tag):
    """Recheck one multiplicative move from its serialized fields."""
    cfg = ring.cfg
    hi = high_level_bound(ring.p)
    before = _elem(cfg, rw["before"])
    after = _elem(cfg, rw["after"])
    checked = _jsonable_value(rw.get("checked_to"))
    rule = rw["rule"]
    if rule in ("truncate-tail", "drop-unit"):
        if rule == "drop-unit" and not _same(cfg, after, ring.one()):
            failures.append(f"{tag}: drop-unit must land on the constant 1")
        diff = ring.sub(before, after)
        lvl = ring.certified_zero_level(diff)
        if lvl is not None and not lvl > hi:
            failures.append(f"{tag}: dropped part at level {lvl} "
                            f"does not clear {hi}")
        if checked is not None and lvl is not None and not lvl >= checked:
            failures.append(f"{tag}: replay reaches {lvl}, below the "
                            f"recorded {checked}")
        return after
    if rule == "shift-p-term":
        witness = _elem(cfg, rw["witness"])
        c = ring.sub(witness, ring.one())
        if not ring.value(c) > Value.zero():
            failures.append(f"{tag}: witness is not a 1-unit")
        wp = witness
        for _ in range(ring.p - 1):
            wp = ring.mul(wp, witness)
        diff = ring.sub(before, ring.mul(after, wp))
        lvl = ring.certified_zero_level(diff)
        if checked is None:
            if lvl is not None:
                failures.append(f"{tag}: recorded exact but replay "
                                f"certifies only {lvl}")
        elif lvl is not None and not lvl >= checked:
            failures.append(f"{tag}: replay reaches {lvl}, below the "
                            f"recorded {checked}")
        if not (checked is None or checked > hi):
            failures.append(f"{tag}: certified level {checked} does not "
                            f"clear {hi}")
        return after
    if rule == "split-product":
        factor = _elem(cfg, rw["factor"])
        diff = ring.sub(before, ring.mul(factor, after))
        lvl = ring.certified_zero_level(diff)
        if checked is None:
            if lvl is not None:
                failures.append(f"{tag}: recorded exact but replay "
                                f"certifies only {lvl}")
        elif lvl is not None and not lvl >= checked:
            failures.append(f"{tag}: replay reaches {lvl}, below the "
                            f"recorded {checked}")
        return after
    failures.append(f"{tag}: unknown rule {rule!r}")
    return after


def _check_chain(rewrites, start, final, ring, failures):
    """Rewrites must link start to final with every move certified."""
    cfg = ring.cfg
    current = start
    for k, rw in enumerate(rewrites):
        tag = f"rewrite[{k}] {rw.get('rule')}"
        before = _elem(cfg, rw["before"])
        if not _same(cfg, before, current):
            failures.append(f"{tag}: does not chain from the previous step")
        current = _replay_rewrite(rw, ring, failures, tag)
    if final is not None and not _same(cfg, current, final):
        failures.append("rewrite chain does not end at the recorded unit")


def _weierstrass_sum(cfg, shifts):
    """Sum of chi^p - chi over the recorded shift elements."""
    ring = LaurentRing(cfg)
    total = ring.zero()
    for data in shifts:
        chi = _elem(cfg, data)
        frob = chi
        for _ in range(cfg.p - 1):
            frob = ring.mul(frob, chi)
        total = ring.add(total, ring.sub(frob, chi))
    return total


def _slice_of(cfg, f, level: Fraction) -> dict:
    """x-exponent -> residue code of the coefficients leading at level."""
    model = cfg.model
    out = {}
    for i, c in f.terms.items():
        if model.characteristic == "equal":
            if model.is_zero_elem(c) or model.value_fraction(c) != level:
                continue
            code = model.residue_code(model.mul(c, model.t_power(-level)))
            if code:
                out[i] = code
        else:
            if c.digits and c.digits[0][0] == level:
                out[i] = c.digits[0][1]
    return out


def _unit_keeps_digits(cfg, nf) -> bool:
    if cfg.model.characteristic != "mixed" or nf.get("unit") is None:
        return False
    ring = LaurentRing(cfg)
    b = ring.sub(_elem(cfg, nf["unit"]), ring.one())
    return any(c.digits for c in b.terms.values())


def _classification_checks(report, cfg, failures):
    cls = report.get("classification") or {}
    nf = report.get("normal_form") or {}
    kind = cls.get("kind")
    p = cfg.p
    gf = cfg.gf
    if kind == "value-witness":
        w = _jsonable_value(cls.get("witness"))
        group = SubgroupSpec.from_json(cls.get("value_group") or [])
        if w is None or not verify_value_witness(w, group, p):
            failures.append("value witness fails the coset test")
        if not (cls.get("e") == p and cls.get("f") == 1):
            failures.append("value witness must carry e = p, f = 1")
    elif kind in ("sep-residue", "insep-residue"):
        rw = cls.get("residue_witness") or {}
        sl = {int(i): c for i, c in (rw.get("slice") or {}).items()}
        rf = slice_to_ratfunc(sl, gf)
        wkind = "artin-schreier" if kind == "sep-residue" else "kummer"
        if not verify_residue_witness(wkind, rf):
            failures.append(f"residue witness fails the {wkind} test")
        if not (cls.get("e") == 1 and cls.get("f") == p):
            failures.append("residue witness must carry e = 1, f = p")
    elif kind == "trivial":
        if "ground" in nf and nf.get("ground_root") is None:
            failures.append("a trivial Kummer form needs a rooted ground")
        if _unit_keeps_digits(cfg, nf):
            failures.append("trivial classification but the unit keeps "
                            "tracked digits")
        if "shifts" in nf:
            if nf.get("x_part") is not None and not _elem(
                    cfg, nf["x_part"]).is_zero():
                failures.append("trivial classification but x_part is "
                                "not zero")
            if nf.get("constant") is not None:
                failures.append("trivial classification but a constant "
                                "remains")
    elif kind == "constant-root":
        if nf.get("ground_root") is not None:
            failures.append("constant-root coexists with a rooted ground")
        if _unit_keeps_digits(cfg, nf):
            failures.append("constant-root but the unit keeps tracked "
                            "digits")
    elif kind in ("constant-descent", "mixed-descent"):
        if nf.get("constant") is None:
            failures.append(f"{kind} carries no constant")
    elif kind == "power-residue":
        rw = cls.get("residue_witness") or {}
        sl = {int(i): c for i, c in (rw.get("slice") or {}).items()}
        root = {int(i): c for i, c in (rw.get("root") or {}).items()}
        folded = {p * i: gf.frobenius(c) for i, c in root.items()}
        if folded != sl:
            failures.append("power-residue root does not raise to the "
                            "recorded slice")
    if kind in ("value-witness", "sep-residue", "insep-residue"):
        d = defect(p, cls.get("e", 1), cls.get("f", 1), p)
        if d.value != 1:
            failures.append("witnessed classification must be defect-free")


def _witness_source_checks(report, cfg, failures):
    """The witness must be recomputable from the named normal-form part."""
    cls = report.get("classification") or {}
    kind = cls.get("kind")
    ring = LaurentRing(cfg)
    model = cfg.model
    nf = report.get("normal_form") or {}

    def element_of(name):
        if name == "input":
            return _elem(cfg, report["input"]["element"])
        if name == "constant":
            if nf.get("constant") is None:
                return None
            return laurent.LaurentPoly.const(cfg,
                                             model.from_json(nf["constant"]))
        data = nf.get(name)
        if data is None:
            return None
        el = _elem(cfg, data)
        return ring.sub(el, ring.one()) if name == "unit" else el

    if kind == "value-witness":
        w = _jsonable_value(cls.get("witness"))
        src = cls.get("witness_of")
        if src not in ("input", "x_part", "unit"):
            failures.append(f"value witness names unknown source {src!r}")
            return
        target = element_of(src)
        if target is None:
            failures.append(f"value witness source {src} is absent")
            return
        try:
            got = ring.value(target).scaled(Fraction(1, cfg.p))
        except Exception as exc:
            failures.append(f"witness source has no value: {exc}")
            return
        if w is None or not (got - w).is_zero():
            failures.append(f"witness {w} does not match v({src})/p = {got}")
        return

    if kind not in ("sep-residue", "insep-residue"):
        return
    rw = cls.get("residue_witness") or {}
    src = cls.get("witness_of")
    if src not in ("x_part", "constant", "unit_start", "unit"):
        failures.append(f"residue witness names unknown source {src!r}")
        return
    target = element_of(src)
    if target is None:
        failures.append(f"residue witness source {src} is absent")
        return
    try:
        level = Fraction(rw.get("level"))
    except (TypeError, ValueError):
        failures.append("residue witness has no level")
        return
    sl = {int(i): c for i, c in (rw.get("slice") or {}).items()}
    got = _slice_of(cfg, target, level)
    gf = cfg.gf
    if kind == "sep-residue" and src == "unit":
        # boundary level p/(p-1): the recorded slice is the residue
        # equation of the C^(-p)-scaled unit slice, reduced modulo
        # Weierstrass images, so the two may differ by a solvable part
        code = model.C_power(-cfg.p).digits[0][1]
        scaled = {i: gf.mul(code, d) for i, d in got.items()}
        diff = {i: gf.sub(scaled.get(i, 0), sl.get(i, 0))
                for i in set(scaled) | set(sl)}
        diff = {i: d for i, d in diff.items() if d}
        if artin_schreier_solution(slice_to_ratfunc(diff, gf)) is None:
            failures.append("boundary witness does not reduce to the unit "
                            "slice modulo Weierstrass images")
    elif got != sl:
        failures.append(f"recorded slice does not match the {src} slice "
                        f"at level {level}")


def _replay_additive(report, cfg, failures):
    """input = x_part + constant + tail + sum of Weierstrass shifts."""
    ring = LaurentRing(cfg)
    nf = report.get("normal_form") or {}
    total = _weierstrass_sum(cfg, nf.get("shifts") or [])
    for key in ("x_part", "tail"):
        if nf.get(key) is not None:
            total = ring.add(total, _elem(cfg, nf[key]))
    if nf.get("constant") is not None:
        const = cfg.model.from_json(nf["constant"])
        total = ring.add(total, laurent.LaurentPoly.make(cfg, [(0, const)]))
    diff = ring.sub(_elem(cfg, report["input"]["element"]), total)
    lvl = ring.certified_zero_level(diff)
    if lvl is not None:
        failures.append(f"additive replay leaves a remainder at level {lvl}")


def _replay_multiplicative(report, cfg, failures):
    """input = absorbed factors * unit_start, then the rewrite chain."""
    model = cfg.model
    ring = LaurentRing(cfg)
    nf = report.get("normal_form") or {}
    start = _elem(cfg, nf["unit_start"])
    if nf.get("ground_start") is not None:
        g0 = model.from_json(nf["ground_start"])
        work = laurent.scale(laurent.shift_x(start, nf.get("x_power", 0)), g0)
    else:
        work = start
        for entry in reversed(nf.get("absorbed") or []):
            mono = model.monomial(entry["code"], Fraction(entry["exp"]))
            work = laurent.scale(laurent.shift_x(work, entry["x"]), mono)
    diff = ring.sub(_elem(cfg, report["input"]["element"]), work)
    lvl = ring.certified_zero_level(diff)
    if lvl is not None:
        checked = _jsonable_value(nf.get("split_checked"))
        if checked is None or not lvl >= checked:
            failures.append(
                f"factor absorption replay leaves level {lvl}")
    final = _elem(cfg, nf["unit"]) if nf.get("unit") is not None else None
    _check_chain(nf.get("rewrites") or [], start, final, ring, failures)
    if nf.get("ground") is not None and nf.get("ground_start") is not None:
        g = model.from_json(nf["ground_start"])
        for rw in nf.get("rewrites") or []:
            if rw["rule"] == "split-product":
                g = model.mul(g, _elem(cfg, rw["factor"]).coeff(0))
        if model.to_json(g) != nf["ground"]:
            failures.append("refolding the split factors does not "
                            "reproduce the ground constant")
    if nf.get("ground_root") is not None:
        cring = CoeffRing(model)
        root = model.from_json(nf["ground_root"])
        ground = model.from_json(nf["ground"])
        power = root
        for _ in range(cfg.p - 1):
            power = cring.mul(power, root)
        lvl = cring.certified_zero_level(cring.sub(power, ground))
        if lvl is not None and not lvl >= Value.of(model.N):
            failures.append(f"ground root only verifies to level {lvl}")


def verify_report(report: dict) -> list:
    """All failures found while replaying a normalization report.

    An empty list means every recorded move, witness and classification
    checks out under independent recomputation.
    """
    failures = []
    if report.get("schema") != 1:
        return [f"unsupported schema {report.get('schema')!r}"]
    session = report.get("session") or {}
    if int(session.get("D", 2)) != 2:
        return ["the replay arithmetic runs over Q + Q*sqrt(2); "
                "session D must be 2"]
    task = report.get("task")
    nf = report.get("normal_form") or {}
    try:
        cfg = _session_config(session)
        if task == "normalize-as":
            _replay_additive(report, cfg, failures)
        elif task == "normalize-kummer":
            if "unit_start" in nf:
                _replay_multiplicative(report, cfg, failures)
            else:
                failures.append("kummer report lacks a unit_start to replay")
        elif task != "classify":
            failures.append(f"unknown task {task!r}")
        _classification_checks(report, cfg, failures)
        _witness_source_checks(report, cfg, failures)
    except Exception as exc:
        # a malformed or forged report must fail verification, not crash it
        failures.append(f"replay aborted: {exc!r}")
    return failures


def _session_config(data):
    from .coeff import EqModel, MixedModel
    from .fields import GaloisField
    from .laurent import ValConfig
    gf = GaloisField(int(data.get("p", 2)), int(data.get("r", 1)))
    if data.get("characteristic") == "mixed":
        model = MixedModel(gf, N=int(data.get("N", 8)))
        cap = data.get("denominators")
        if cap:
            model.request_denominator(int(cap))
    else:
        model = EqModel(gf)
    mode = data.get("mode", "vt")
    return ValConfig(mode, model)
