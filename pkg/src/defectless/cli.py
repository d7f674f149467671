"""Command line front end: normalize generators and verify their reports.

A session is described by a small key = value file (p, r, D, N, mode,
characteristic); elements come in the text grammar of parse_element.
Every task writes one JSON report with sorted keys and a fixed schema, so
byte-identical runs diff clean and the verifier can replay a report with
no access to the process that produced it.

Exit codes: 0 on success, 1 when a certificate fails verification, 2 for
configuration or usage problems.
"""

import argparse
import json
import sys
from dataclasses import dataclass

from . import certify, laurent
from .coeff import EqModel, MixedModel
from .engine_rt import normalize_artin_schreier_rt, normalize_kummer_rt
from .engine_vt import normalize_artin_schreier, normalize_kummer
from .errors import DefectlessError
from .fields import GaloisField
from .laurent import LaurentPoly, ValConfig
from .parser import parse_element

TASKS = ("normalize-as", "normalize-kummer", "classify",
         "verify-certificate", "selftest")


class ConfigError(DefectlessError):
    """A session file or flag combination the tool cannot honor."""


@dataclass
class SessionConfig:
    p: int = 2
    r: int = 1
    D: int = 2
    N: int = 8
    mode: str = "vt"
    characteristic: str = "equal"


def parse_session(text: str) -> SessionConfig:
    """key = value lines with # comments; unknown keys are errors."""
    sc = SessionConfig()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        if not eq:
            raise ConfigError(f"line {ln}: expected key = value, got {raw!r}")
        key, val = key.strip(), val.strip()
        if key in ("p", "r", "D", "N"):
            try:
                setattr(sc, key, int(val))
            except ValueError:
                raise ConfigError(f"line {ln}: {key} must be an integer, "
                                  f"got {val!r}") from None
        elif key == "mode":
            if val not in ("vt", "rt"):
                raise ConfigError(f"line {ln}: mode must be vt or rt")
            sc.mode = val
        elif key == "characteristic":
            if val not in ("equal", "mixed"):
                raise ConfigError(
                    f"line {ln}: characteristic must be equal or mixed")
            sc.characteristic = val
        else:
            raise ConfigError(f"line {ln}: unknown key {key!r}")
    _validate(sc)
    return sc


def _validate(sc: SessionConfig):
    if sc.p < 2 or any(sc.p % k == 0 for k in range(2, sc.p)):
        raise ConfigError(f"p must be prime, got {sc.p}")
    if sc.r < 1:
        raise ConfigError(f"r must be at least 1, got {sc.r}")
    if sc.D != 2:
        # Value supports other non-square constants, but the Laurent layer
        # builds every coefficient value over sqrt(2)
        raise ConfigError("the session value group is Q + Q*sqrt(2); "
                          "D must be 2")
    if sc.N < 1:
        raise ConfigError(f"N must be at least 1, got {sc.N}")


def build_valconfig(sc: SessionConfig) -> ValConfig:
    gf = GaloisField(sc.p, sc.r)
    if sc.characteristic == "equal":
        model = EqModel(gf, N=sc.N)
    else:
        model = MixedModel(gf, N=sc.N)
    return ValConfig(sc.mode, model)


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------

def _value_str(v):
    return None if v is None else v.to_str()


def _classification_json(cls) -> dict:
    rw = None
    if cls.residue_witness is not None:
        rw = {}
        for key, val in cls.residue_witness.items():
            if isinstance(val, dict):
                rw[key] = {str(i): c for i, c in val.items()}
            else:
                rw[key] = str(val)
    group = cls.value_group
    return {
        "kind": cls.kind,
        "witness": _value_str(cls.witness),
        "witness_of": cls.witness_of or None,
        "value_group": group.to_json() if group is not None else None,
        "residue_witness": rw,
        "e": cls.e,
        "f": cls.f,
        "note": cls.note,
    }


def _rewrite_json(rw) -> dict:
    out = {
        "rule": rw.rule,
        "before": laurent.to_json(rw.before),
        "after": laurent.to_json(rw.after),
        "witness": None if rw.witness is None else laurent.to_json(rw.witness),
        "checked_to": _value_str(rw.checked_to),
    }
    if "factor" in rw.aux:
        out["factor"] = laurent.to_json(rw.aux["factor"])
    return out


_SHIFT_KEYS = {"strip": "chi", "peel": "root", "residue-reduce": "lift"}


def _record_shifts(cfg, record) -> list:
    """Constant-descent moves, embedded at x-exponent 0."""
    model = cfg.model
    out = []
    for st in record.steps:
        if st["kind"] == "strip":
            c = st["chi"]
        elif st["kind"] == "shift":
            c = st["s"]
        else:
            c = model.const(st["e"])
        out.append(LaurentPoly.const(cfg, c))
    return out


def _as_normal_form_json(cfg, x_part, constant, record, tail, steps) -> dict:
    model = cfg.model
    shifts = [st[_SHIFT_KEYS[st["kind"]]] for st in steps
              if st["kind"] in _SHIFT_KEYS]
    if record is not None:
        shifts.extend(_record_shifts(cfg, record))
        if not model.is_zero_elem(record.tail):
            tail = laurent.add(tail, LaurentPoly.const(cfg, record.tail))
    const_json = None
    if constant is not None and not model.is_zero_elem(constant):
        const_json = model.to_json(constant)
    return {
        "x_part": laurent.to_json(x_part),
        "constant": const_json,
        "tail": laurent.to_json(tail),
        "shifts": [laurent.to_json(s) for s in shifts],
    }


def _run_as(cfg, elem):
    if cfg.mode == "vt":
        nf = normalize_artin_schreier(elem, cfg)
        payload = _as_normal_form_json(cfg, nf.x_part, nf.constant,
                                       nf.constant_record, nf.tail, nf.steps)
    else:
        nf = normalize_artin_schreier_rt(elem, cfg)
        record = nf.constant_record
        if record is not None:
            x_part = LaurentPoly(
                cfg, {i: c for i, c in nf.poly.terms.items() if i})
            constant = record.constant
        else:
            x_part = nf.poly
            constant = None
        payload = _as_normal_form_json(cfg, x_part, constant, record,
                                       nf.tail, nf.steps)
    return payload, nf.classification


def _run_kummer(cfg, elem):
    model = cfg.model
    if cfg.mode == "vt":
        nf = normalize_kummer(elem, cfg)
        root = nf.ground_root
        payload = {
            "ground": model.to_json(nf.ground),
            "ground_root": None if root is None else model.to_json(root),
            "ground_start": model.to_json(nf.ground_start),
            "x_power": nf.x_power,
            "x_residue": nf.x_residue,
            "unit": laurent.to_json(nf.unit),
            "unit_start": laurent.to_json(nf.unit_start),
            "split_checked": _value_str(nf.split_checked),
            "rewrites": [_rewrite_json(rw) for rw in nf.rewrites],
        }
    else:
        nf = normalize_kummer_rt(elem, cfg)
        start = nf.rewrites[0].before if nf.rewrites else nf.unit
        payload = {
            "absorbed": [{"code": code, "exp": str(exp), "x": xs}
                         for _, code, exp, xs in nf.absorbed],
            "scale_exp": str(nf.scale_exp),
            "unit": laurent.to_json(nf.unit),
            "unit_start": laurent.to_json(start),
            "rewrites": [_rewrite_json(rw) for rw in nf.rewrites],
        }
    return payload, nf.classification


def build_report(task: str, sc: SessionConfig, cfg, text: str) -> dict:
    elem = parse_element(text, cfg)
    if task == "normalize-as" or (task == "classify"
                                  and sc.characteristic == "equal"):
        payload, cls = _run_as(cfg, elem)
    else:
        payload, cls = _run_kummer(cfg, elem)
    model = cfg.model
    # session is recorded after the run so denominator growth is captured
    session = {
        "p": sc.p, "r": sc.r, "D": sc.D, "N": sc.N,
        "mode": cfg.mode, "characteristic": sc.characteristic,
        "denominators": getattr(model, "denom_cap", None),
    }
    return {
        "schema": 1,
        "task": task,
        "session": session,
        "input": {"text": text, "element": laurent.to_json(elem)},
        "normal_form": payload,
        "classification": _classification_json(cls),
    }


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(report: dict, out_path: str):
    text = json.dumps(report, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _report_failures(failures):
    for line in failures:
        print(f"FAIL {line}", file=sys.stderr)


_SELFTEST_CASES = (
    ("normalize-as", "characteristic = equal\nmode = vt\n",
     "t^(-2)*x^(-4) + t^(-1)"),
    ("normalize-kummer", "characteristic = mixed\nmode = vt\n",
     "1 + 2^(1/2)*x"),
    ("normalize-as", "characteristic = equal\nmode = rt\n",
     "t^(-1) + x"),
    ("normalize-kummer", "characteristic = mixed\nmode = rt\n",
     "2^(-1) + x"),
)


def _selftest() -> int:
    bad = 0
    for task, conf, text in _SELFTEST_CASES:
        sc = parse_session(conf)
        cfg = build_valconfig(sc)
        report = build_report(task, sc, cfg, text)
        failures = certify.verify_report(report)
        if failures:
            bad += 1
            print(f"FAIL {task} {text}")
            _report_failures(failures)
        else:
            print(f"PASS {task} {text}")
    return 1 if bad else 0


def _dispatch(args) -> int:
    if args.task == "selftest":
        return _selftest()
    if args.task == "verify-certificate":
        raw = _read_input(args.input)
        try:
            report = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"input is not JSON: {exc}") from None
        failures = certify.verify_report(report)
        if failures:
            _report_failures(failures)
            return 1
        print("certificate verified")
        return 0
    sc = (parse_session(_read_input(args.config))
          if args.config else SessionConfig())
    cfg = build_valconfig(sc)
    text = _read_input(args.input).strip()
    report = build_report(args.task, sc, cfg, text)
    _emit(report, args.out)
    failures = certify.verify_report(report)
    if failures:
        _report_failures(failures)
        return 1
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="defectless",
        description="Normalize degree-p Artin-Schreier and Kummer "
                    "generators over valued rational function fields and "
                    "verify the emitted certificates.")
    ap.add_argument("--task", required=True, choices=TASKS)
    ap.add_argument("--config", metavar="FILE",
                    help="session file with key = value lines "
                         "(p, r, D, N, mode, characteristic)")
    ap.add_argument("--input", metavar="FILE", default="-",
                    help="element text, or report JSON for "
                         "verify-certificate; - reads stdin")
    ap.add_argument("--out", metavar="FILE", default="-",
                    help="report destination, - for stdout")
    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except DefectlessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
