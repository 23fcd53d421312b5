"""Declarative job input, orchestration, result cache and report emission.

A job file is line-oriented with [field], [space], [bracket] and [tasks]
sections.  Scalars are written as sums of terms `a/b * z^k` where z is the
generator of the configured cyclotomic field.  Reports are deterministic:
identical job + tool version give byte-identical output, so timings are
logged to stderr rather than embedded (a cached and a fresh run must agree).

Exit codes: 0 when every requested task ran (mathematical negative verdicts
are results, not errors), 1 for parse or validation problems, 2 when a
theorem-guaranteed internal invariant broke.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .enveloping import (
    BracketTable,
    enveloping_filtration,
    hecke_presentation,
    lie_check,
    pbw_check,
    primitive_check,
    validate_bracket,
)
from .errors import (
    InternalCheckError,
    ParseError,
    ValidationError,
    WorkbenchError,
)
from .fixtures import preset_bracket
from .pareigis import check_pi_in_E, check_pi_su, verify_PL, zeta_space
from .scalars import CycloField, field_make
from .spaces import make_braiding, word_name
from .tensorbialg import nichols_dims, primitive_space
from .tower import is_quadratic, nichols_via_tower, sdeg

MAX_DEGREE = 12

TASK_NAMES = (
    "ybe", "min_poly", "e_spaces", "nichols", "nichols_tower", "sdeg",
    "quadratic", "bracket", "lie_check", "pbw", "hecke", "pareigis",
    "pl_verify",
)


# ---------------------------------------------------------------------------
# scalar and value parsing
# ---------------------------------------------------------------------------

_TERM = re.compile(
    r"^\s*(?P<num>\d+)?(?:\s*/\s*(?P<den>\d+))?\s*(?:(?(num)\*\s*)?"
    r"(?P<z>z)(?:\^(?P<pow>\d+))?)?\s*$"
)


def parse_scalar(field: CycloField, text: str, line: int = 0):
    text = text.strip()
    if not text:
        raise ParseError(line, "empty scalar")
    # split into signed terms at top level (no parentheses in the grammar)
    terms = []
    sign, start = 1, 0
    i = 0
    first = True
    while i <= len(text):
        if i == len(text) or text[i] in "+-":
            chunk = text[start:i].strip()
            if chunk:
                terms.append((sign, chunk))
            elif not first and i < len(text):
                raise ParseError(line, "dangling sign in scalar %r" % text)
            if i < len(text):
                sign = 1 if text[i] == "+" else -1
                start = i + 1
            first = False
        i += 1
    if not terms:
        raise ParseError(line, "no terms in scalar %r" % text)
    total = field.zero
    for sgn, chunk in terms:
        m = _TERM.match(chunk)
        if not m or (m.group("num") is None and m.group("z") is None):
            raise ParseError(line, "bad scalar term %r" % chunk)
        num = int(m.group("num")) if m.group("num") else 1
        den = int(m.group("den")) if m.group("den") else 1
        if den == 0:
            raise ParseError(line, "zero denominator in %r" % chunk)
        coeff = field.from_fraction(sgn * num, den)
        if m.group("z"):
            power = int(m.group("pow")) if m.group("pow") else 1
            coeff = coeff * field.gen ** power
        total = total + coeff
    return total


def _split_top(text: str, line: int):
    """Split a bracketed list body on top-level commas."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError(line, "unbalanced ']'")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise ParseError(line, "unbalanced '['")
    last = text[start:]
    if last.strip() or parts:
        parts.append(last)
    return parts


def parse_value(field: CycloField, text: str, line: int):
    """ints, ranges a..b, nested lists, scalar expressions, bare words."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(line, "list does not end with ']'")
        return [parse_value(field, p, line) for p in _split_top(text[1:-1], line)]
    if re.fullmatch(r"-?\d+\s*\.\.\s*-?\d+", text):
        lo, hi = re.split(r"\.\.", text)
        return ("range", int(lo), int(hi))
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9:]*", text) and \
            not re.fullmatch(r"z(\^\d+)?", text):
        return text
    return parse_scalar(field, text, line)


class JobSpec:
    def __init__(self, field_order, space_decl, brackets, tasks,
                 output_format="json", cache_dir=None, degree_budget=None):
        self.field_order = field_order
        self.space_decl = space_decl      # {"kind": ..., "params": {...}}
        self.brackets = brackets          # list of {"degree": n, "values": rows} | {"preset": name}
        self.tasks = tasks                # list of (name, args tuple)
        self.output_format = output_format
        self.cache_dir = cache_dir
        self.degree_budget = degree_budget

    def echo(self):
        return {
            "field_order": self.field_order,
            "space": _jsonable(self.space_decl),
            "brackets": _jsonable(self.brackets),
            "tasks": [
                {"name": name, "args": _jsonable(list(args))}
                for name, args in self.tasks
            ],
            "degree_budget": self.degree_budget,
        }


def _jsonable(value):
    from .scalars import CycloScalar

    if isinstance(value, CycloScalar):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "__int__") and not isinstance(value, (bool, int)):
        # exact rationals print as n or n/d
        return str(value)
    return value


def parse_spec(text: str) -> JobSpec:
    """Parse the documented job grammar into a validated JobSpec."""
    field_order = None
    field = None
    space_decl = None
    space_lines = {}
    brackets = []
    bracket_lines = None
    tasks = []
    section = None

    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            raw.append((lineno, stripped))

    # the field section must be interpreted first so scalars can parse
    for lineno, stripped in raw:
        if stripped.lower() == "[field]":
            section = "field"
            continue
        if stripped.startswith("["):
            section = None
            continue
        if section == "field" and "=" in stripped:
            key, _, val = stripped.partition("=")
            if key.strip() == "m":
                try:
                    field_order = int(val.strip())
                except ValueError:
                    raise ParseError(lineno, "field order must be an integer")
    if field_order is None:
        raise ParseError(0, "missing [field] section with m = <order>")
    if field_order < 1:
        raise ParseError(0, "field order must be >= 1")
    field = field_make(field_order)

    section = None
    for lineno, stripped in raw:
        low = stripped.lower()
        if low in ("[field]", "[space]", "[bracket]", "[tasks]"):
            if low == "[bracket]":
                bracket_lines = {}
                brackets.append(bracket_lines)
            section = low[1:-1]
            continue
        if stripped.startswith("["):
            raise ParseError(lineno, "unknown section %s" % stripped)
        if section == "field":
            continue
        if section == "space":
            if "=" not in stripped:
                raise ParseError(lineno, "expected key = value")
            key, _, val = stripped.partition("=")
            space_lines[key.strip()] = (parse_value(field, val, lineno), lineno)
        elif section == "bracket":
            if "=" not in stripped:
                raise ParseError(lineno, "expected key = value")
            key, _, val = stripped.partition("=")
            bracket_lines[key.strip()] = (parse_value(field, val, lineno), lineno)
        elif section == "tasks":
            if "=" in stripped:
                name, _, val = stripped.partition("=")
                name = name.strip()
                args = tuple(
                    parse_value(field, part, lineno)
                    for part in val.split(",")
                )
            else:
                name, args = stripped, ()
            if name not in TASK_NAMES:
                raise ParseError(lineno, "unknown task %r" % name)
            tasks.append((name, args))
        elif section is None:
            raise ParseError(lineno, "content outside any section")

    if not space_lines:
        raise ParseError(0, "missing [space] section")
    kind_entry = space_lines.pop("kind", None)
    if kind_entry is None:
        raise ParseError(0, "the [space] section needs kind = ...")
    kind = kind_entry[0]
    budget_entry = space_lines.pop("budget", None)
    degree_budget = None
    if budget_entry is not None:
        degree_budget = int(budget_entry[0])
        if degree_budget > MAX_DEGREE:
            raise ValidationError(
                "degree budget %d exceeds the global limit %d"
                % (degree_budget, MAX_DEGREE))
    params = {k: v for k, (v, _ln) in space_lines.items()}
    space_decl = {"kind": kind, "params": params}

    bracket_decls = []
    for bl in brackets:
        if "preset" in bl:
            bracket_decls.append({"preset": bl["preset"][0]})
            continue
        if "degree" not in bl or "values" not in bl:
            raise ParseError(0, "[bracket] needs degree = n and values = [...] or preset = name")
        degree = bl["degree"][0]
        values = bl["values"][0]
        if not isinstance(degree, int) or degree < 2:
            raise ParseError(bl["degree"][1], "bracket degree must be an integer >= 2")
        if not isinstance(values, list):
            raise ParseError(bl["values"][1], "bracket values must be a list of rows")
        bracket_decls.append({"degree": degree, "values": values})

    job = JobSpec(field_order, space_decl, bracket_decls, tasks,
                  degree_budget=degree_budget)
    _validate_job(job, field)
    return job


def _validate_job(job: JobSpec, field: CycloField):
    for name, args in job.tasks:
        if name in ("pareigis", "pl_verify") and args:
            n = args[0]
            if not isinstance(n, int) or n < 2:
                raise ValidationError("%s needs an arity >= 2" % name)
            if n > 2 and field.order % n:
                raise ValidationError(
                    "task %s at arity %d needs %d | m (m = %d): no primitive "
                    "root available" % (name, n, n, field.order))
        for a in args:
            if isinstance(a, int) and a > MAX_DEGREE:
                raise ValidationError(
                    "degree argument %d exceeds the global limit %d"
                    % (a, MAX_DEGREE))


# ---------------------------------------------------------------------------
# task execution
# ---------------------------------------------------------------------------

def _subspace_payload(space, subspace, degree):
    rows = []
    for row in subspace.rows:
        rows.append({
            word_name(c, degree, space.dim): str(v)
            for c, v in sorted(row.items())
        })
    return {"dim": subspace.dim, "basis": rows}


def _int_arg(args, idx, default):
    if len(args) > idx and isinstance(args[idx], int):
        return args[idx]
    return default


class _JobContext:
    def __init__(self, job: JobSpec, degree_override=None):
        self.job = job
        self.field = field_make(job.field_order)
        params = dict(job.space_decl["params"])
        budget = job.degree_budget or 8
        if degree_override:
            budget = max(budget, degree_override)
        self.degree_override = degree_override
        self.space = make_braiding(
            job.space_decl["kind"], params, self.field, degree_budget=budget)
        self.bracket = None
        self.bracket_report = None
        if job.brackets:
            self.bracket = self._build_bracket(job.brackets)

    def _build_bracket(self, decls):
        entries = {}
        for decl in decls:
            if "preset" in decl:
                table = preset_bracket(self.space, decl["preset"])
                for n, vecs in table.entries.items():
                    entries[n] = vecs
                continue
            degree = decl["degree"]
            rows = []
            for row in decl["values"]:
                vec = {}
                for j, coeff in enumerate(row):
                    scal = coeff if not isinstance(coeff, int) else \
                        self.field.from_rational(coeff)
                    if not scal.is_zero():
                        vec[j] = scal
                rows.append(vec)
            entries[degree] = rows
        return validate_bracket(self.space, BracketTable(self.space, entries))

    def degree(self, requested):
        return self.degree_override or requested


def run_task(ctx: _JobContext, name: str, args: tuple):
    space = ctx.space
    if name == "ybe":
        return {"valid": True, "dim": space.dim, "kind": space.kind}
    if name == "min_poly":
        return {"coefficients": [str(c) for c in space.min_poly]}
    if name == "e_spaces":
        if args and isinstance(args[0], tuple) and args[0][0] == "range":
            lo, hi = args[0][1], args[0][2]
        else:
            lo = _int_arg(args, 0, 2)
            hi = _int_arg(args, 1, lo)
        out = {}
        for n in range(lo, hi + 1):
            out[str(n)] = _subspace_payload(space, primitive_space(space, n), n)
        return {"primitives": out}
    if name == "nichols":
        upto = ctx.degree(_int_arg(args, 0, 4))
        return {"dims": nichols_dims(space, upto)}
    if name == "nichols_tower":
        upto = ctx.degree(_int_arg(args, 0, 4))
        return {"dims": nichols_via_tower(space, upto)}
    if name == "sdeg":
        upto = ctx.degree(_int_arg(args, 0, 4))
        verdict = sdeg(space, upto)
        return {
            "value": verdict.value,
            "status": verdict.status,
            "certificate": verdict.certificate,
            "trace": [
                {"dims": t["dims"],
                 "added": {str(k): v for k, v in t["added"].items()}}
                for t in verdict.tower_trace
            ],
        }
    if name == "quadratic":
        upto = ctx.degree(_int_arg(args, 0, 4))
        return {"quadratic": is_quadratic(space, upto)}
    if name == "bracket":
        if ctx.bracket is None:
            raise ValidationError("task bracket needs a [bracket] section")
        return {
            "validated": True,
            "degrees": sorted(ctx.bracket.entries),
            "zero": ctx.bracket.is_zero(),
        }
    if name in ("lie_check", "pbw"):
        if ctx.bracket is None:
            raise ValidationError("task %s needs a [bracket] section" % name)
        cutoff = _int_arg(args, 0, 4)
        slack = _int_arg(args, 1, 2)
        fq = enveloping_filtration(ctx.bracket, cutoff, slack)
        if name == "lie_check":
            verdict = lie_check(ctx.bracket, cutoff, slack, filtration=fq)
            payload = {"status": verdict.status, "cutoff": cutoff, "slack": slack}
            if verdict.witness is not None:
                payload["witness"] = {
                    word_name(c, 1, space.dim): str(v)
                    for c, v in sorted(verdict.witness.items())
                }
            return payload
        verdict = pbw_check(ctx.bracket, cutoff, slack, filtration=fq)
        return {
            "status": verdict.status,
            "cutoff": cutoff,
            "slack": slack,
            "gr_dims": verdict.gr_dims,
            "s_dims": verdict.s_dims,
            "theta_bound_ok": verdict.theta_bound_ok,
            "failure_degree": verdict.failure_degree,
            "primitives_match": primitive_check(
                ctx.bracket, cutoff, slack, filtration=fq),
            "unconstrained_degrees": fq.unconstrained,
        }
    if name == "hecke":
        info = space.hecke_analysis()
        if info is None:
            return {"hecke": False}
        payload = {"hecke": True, "mark": str(info["mark"]),
                   "regular": info["regular"]}
        if ctx.bracket is not None and info["regular"]:
            pres = hecke_presentation(ctx.bracket)
            payload["relations"] = [
                {
                    "quadratic": {word_name(c, 2, space.dim): str(v)
                                  for c, v in sorted(rel["quadratic"].items())},
                    "linear": {word_name(c, 1, space.dim): str(v)
                               for c, v in sorted(rel["linear"].items())},
                }
                for rel in pres.relations
            ]
            payload["induced_bracket_zero"] = pres.induced_bracket_zero
        return payload
    if name == "pareigis":
        n = _int_arg(args, 0, 2)
        exponent = args[1] if len(args) > 1 and isinstance(args[1], int) else 1
        # at arity 2 the only primitive root is -1, whatever the exponent says
        zeta = ctx.field.root_of_unity(n, exponent if exponent > 0 else 1)
        zs = zeta_space(space, n, zeta)
        return {
            "arity": n,
            "zeta": str(zeta),
            "zeta_space_dim": zs.dim,
            "pi_image_in_primitives": check_pi_in_E(space, n, zeta),
            "pi_images_span_primitives": check_pi_su(space, n),
        }
    if name == "pl_verify":
        n = _int_arg(args, 0, 2)
        bracket = ctx.bracket or BracketTable.zero(space, min(4, space.degree_budget))
        return {"arity": n, **verify_PL(bracket, n)}
    raise ValidationError("unknown task %r" % name)


# ---------------------------------------------------------------------------
# the report and the cache
# ---------------------------------------------------------------------------

def _canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _task_cache_key(job: JobSpec, name: str, args: tuple,
                    degree_override) -> str:
    needs_bracket = name in ("bracket", "lie_check", "pbw", "hecke", "pl_verify")
    basis = {
        "version": __version__,
        "field": job.field_order,
        "space": _jsonable(job.space_decl),
        "budget": job.degree_budget,
        "override": degree_override,
        "task": name,
        "args": _jsonable(list(args)),
        "bracket": _jsonable(job.brackets) if needs_bracket else None,
    }
    return hashlib.sha256(_canonical_json(basis).encode()).hexdigest()


class Report:
    def __init__(self, job: JobSpec, tasks: list, input_hash: str):
        self.job = job
        self.tasks = tasks
        self.input_hash = input_hash

    def payload(self):
        return {
            "tool": {"name": "braidcalc", "version": __version__},
            "input_hash": self.input_hash,
            "job": self.job.echo(),
            "tasks": self.tasks,
        }

    def emit(self, fmt: str = "json") -> bytes:
        if fmt == "json":
            return (json.dumps(self.payload(), sort_keys=True, indent=2)
                    + "\n").encode()
        if fmt == "text":
            lines = ["braidcalc %s  input %s" % (__version__, self.input_hash[:12])]
            for entry in self.tasks:
                name = entry["name"]
                if entry["status"] == "error":
                    lines.append("%-14s ERROR %s: %s" % (
                        name, entry["error"]["type"], entry["error"]["message"]))
                    continue
                lines.append("%-14s %s" % (name, _render_text(entry["result"])))
            return ("\n".join(lines) + "\n").encode()
        raise ValidationError("unknown format %r" % fmt)


def _render_text(result) -> str:
    if isinstance(result, dict):
        parts = []
        for key, val in result.items():
            if isinstance(val, (dict, list)) and len(str(val)) > 60:
                parts.append("%s=<%d entries>" % (key, len(val)))
            else:
                parts.append("%s=%s" % (key, val))
        return " ".join(parts)
    return str(result)


def run(job: JobSpec, cache_dir=None, use_cache=True, jobs=1,
        task_filter=None, degree_override=None) -> Report:
    input_hash = hashlib.sha256(
        _canonical_json(job.echo()).encode()).hexdigest()
    ctx = _JobContext(job, degree_override=degree_override)
    cache_dir = cache_dir or job.cache_dir
    selected = [
        (idx, name, args) for idx, (name, args) in enumerate(job.tasks)
        if task_filter is None or name in task_filter
    ]

    def execute(item):
        idx, name, args = item
        entry = {"name": name, "args": _jsonable(list(args))}
        key = _task_cache_key(job, name, args, degree_override)
        path = os.path.join(cache_dir, key + ".json") if cache_dir else None
        if path and use_cache and os.path.exists(path):
            with open(path, "rb") as fh:
                entry["result"] = json.loads(fh.read().decode())
            entry["status"] = "ok"
            entry["cached"] = True
            return idx, entry, None
        start = time.monotonic()
        try:
            result = run_task(ctx, name, args)
        except InternalCheckError as exc:
            entry["status"] = "error"
            entry["error"] = {"type": "InternalCheckError", "message": str(exc)}
            return idx, entry, exc
        except WorkbenchError as exc:
            entry["status"] = "error"
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
            return idx, entry, None
        seconds = time.monotonic() - start
        print("braidcalc: task %s finished in %.2fs" % (name, seconds),
              file=sys.stderr)
        entry["result"] = _jsonable(result)
        entry["status"] = "ok"
        entry["cached"] = False
        if path and use_cache:
            os.makedirs(cache_dir, exist_ok=True)
            tmp = path + ".tmp.%d" % os.getpid()
            with open(tmp, "wb") as fh:
                fh.write(_canonical_json(entry["result"]).encode())
            os.replace(tmp, path)
        return idx, entry, None

    internal_failure = None
    results = {}
    if jobs > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for idx, entry, hard in pool.map(execute, selected):
                results[idx] = entry
                internal_failure = internal_failure or hard
    else:
        for item in selected:
            idx, entry, hard = execute(item)
            results[idx] = entry
            internal_failure = internal_failure or hard
    ordered = [results[idx] for idx in sorted(results)]
    report = Report(job, ordered, input_hash)
    report.internal_failure = internal_failure
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="braidcalc",
        description="exact invariants of finite-dimensional braided vector spaces")
    parser.add_argument("--input", required=True, help="job file")
    parser.add_argument("--task", action="append", help="run only these tasks")
    parser.add_argument("--degree", type=int, default=None,
                        help="override degree arguments of degree-driven tasks")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--output", default=None, help="write the report here")
    opts = parser.parse_args(argv)
    try:
        with open(opts.input, "r", encoding="utf-8") as fh:
            job = parse_spec(fh.read())
    except OSError as exc:
        print("braidcalc: cannot read input: %s" % exc, file=sys.stderr)
        return 1
    except (ParseError, ValidationError) as exc:
        print("braidcalc: %s" % exc, file=sys.stderr)
        return 1
    if opts.degree is not None and opts.degree > MAX_DEGREE:
        print("braidcalc: --degree beyond the global limit", file=sys.stderr)
        return 1
    try:
        report = run(job, cache_dir=opts.cache_dir,
                     use_cache=not opts.no_cache, jobs=opts.jobs,
                     task_filter=set(opts.task) if opts.task else None,
                     degree_override=opts.degree)
    except (ParseError, ValidationError, WorkbenchError) as exc:
        if isinstance(exc, InternalCheckError):
            print("braidcalc: internal invariant failure: %s" % exc,
                  file=sys.stderr)
            return 2
        print("braidcalc: %s" % exc, file=sys.stderr)
        return 1
    blob = report.emit(opts.format)
    if opts.output:
        with open(opts.output, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)
    return 2 if report.internal_failure else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
