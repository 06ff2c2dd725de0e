"""Input documents and report serialization.

Documents are JSON objects::

    {
      "space": "euclidean" | "spherical" | "hyperbolic",
      "dimension": n,
      "points": [[...], ...],            # n coordinates (n + 1 when curved)
      "labels": ["A1", ...],             # optional
      "alpha": [...],                    # optional dependence override
      "framework": {"k": 2, "flavor": "G"}            # or
      "framework": {"k": 1, "labels": {"1-2": "strut"}},
      "polar": {"base": [...], "tangents": [[...], ...]}   # curved alternative to points
    }

A report produced by this package is also accepted as input: its
``configuration`` section is read back.  Floats are written with 17
significant digits so a report round-trips bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .dependence import Flavor, Label, TensegrityFramework, build_framework
from .errors import ValidationError
from .geometry import MetricSignature, PointConfiguration, Space

FLOAT_FORMAT = ".17g"


def _plain(x):
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_dict"):
        return _plain(x.to_dict())
    return x


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, FLOAT_FORMAT)
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _emit(x, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if x is None:
        out.append("null")
    elif isinstance(x, bool):
        out.append("true" if x else "false")
    elif isinstance(x, int):
        out.append(str(x))
    elif isinstance(x, float):
        out.append(format_float(x))
    elif isinstance(x, str):
        out.append(json.dumps(x, ensure_ascii=False))
    elif isinstance(x, dict):
        if not x:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(x.items()):
            out.append(pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(x) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(x, list):
        if not x:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in x):
            out.append("[")
            for i, v in enumerate(x):
                _emit(v, indent, level + 1, out)
                if i < len(x) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(x):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(x) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj, indent=2) -> str:
    """JSON text with every float at 17 significant digits; NaN and infinities become null."""
    out = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    doc = loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("line 1: the document must be a JSON object")
    return doc


FIXTURE_DIR = Path(__file__).parent / "fixtures"


def fixture_names() -> list:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name: str) -> dict:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise ValidationError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return load_document(path)


def _field(doc, key, kind, where, required=True):
    if key not in doc:
        if required:
            raise ValidationError(f"field '{where}{key}': missing")
        return None
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise ValidationError(f"field '{where}{key}': expected {getattr(kind, '__name__', kind)}")
    return val


def _matrix(val, name):
    try:
        arr = np.array(val, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"field '{name}': expected a list of numeric rows") from None
    if arr.ndim != 2:
        raise ValidationError(f"field '{name}': expected a list of numeric rows")
    return arr


@dataclass(frozen=True, eq=False)
class Document:
    config: PointConfiguration
    alpha: np.ndarray | None = None
    framework: dict | None = None


def parse_document(doc: dict) -> Document:
    """Validate an input document (or a report) and build the configuration."""
    if "configuration" in doc and isinstance(doc["configuration"], dict):
        inner = dict(doc["configuration"])
        if "framework" not in inner and isinstance(doc.get("framework_request"), dict):
            inner["framework"] = doc["framework_request"]
        doc = inner
    space = Space.parse(_field(doc, "space", str, ""))
    n = _field(doc, "dimension", int, "")
    if isinstance(n, bool) or n < 1:
        raise ValidationError("field 'dimension': must be a positive integer")
    metric = MetricSignature(space, n)
    labels = _field(doc, "labels", list, "", required=False) or ()
    if "points" in doc:
        pts = _matrix(doc["points"], "points")
        if pts.shape[1] != metric.ambient_dim:
            raise ValidationError(
                f"field 'points': {space.value} dimension {n} needs {metric.ambient_dim} coordinates per row, "
                f"got {pts.shape[1]}"
            )
        config = PointConfiguration(metric, pts, tuple(labels))
    elif "polar" in doc:
        if not metric.curved:
            raise ValidationError("field 'polar': only curved spaces accept polar data")
        polar = _field(doc, "polar", dict, "")
        base = np.array(_field(polar, "base", list, "polar."), dtype=float)
        tangents = _matrix(_field(polar, "tangents", list, "polar."), "polar.tangents")
        if base.shape != (metric.ambient_dim,) or tangents.shape[1] != metric.ambient_dim:
            raise ValidationError(f"field 'polar': vectors need {metric.ambient_dim} coordinates")
        config = PointConfiguration.from_polar(metric, base, tangents, tuple(labels))
    else:
        raise ValidationError("field 'points': missing (give 'points' or 'polar')")
    alpha = doc.get("alpha")
    if alpha is not None:
        try:
            alpha = np.array(alpha, dtype=float)
        except (TypeError, ValueError):
            raise ValidationError("field 'alpha': expected a list of numbers") from None
        if alpha.shape != (config.m,):
            raise ValidationError(f"field 'alpha': expected {config.m} entries")
    framework = doc.get("framework")
    if framework is not None and not isinstance(framework, dict):
        raise ValidationError("field 'framework': expected an object")
    return Document(config, alpha, framework)


def face_key(face) -> str:
    return "-".join(str(i + 1) for i in face)


def parse_face_key(key: str, m: int) -> tuple:
    try:
        face = tuple(sorted(int(x) - 1 for x in str(key).replace(",", "-").split("-")))
    except ValueError:
        raise ValidationError(f"field 'framework.labels': bad face key {key!r}") from None
    if any(i < 0 or i >= m for i in face):
        raise ValidationError(f"field 'framework.labels': face {key!r} references a missing vertex")
    return face


def framework_from_spec(spec: dict, dep, m: int) -> TensegrityFramework:
    """Build a framework from ``{k, flavor}`` or ``{k, labels}``."""
    if "k" not in spec:
        raise ValidationError("field 'framework.k': missing")
    k = spec["k"]
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValidationError("field 'framework.k': expected an integer")
    if "labels" in spec:
        raw = spec["labels"]
        if not isinstance(raw, dict):
            raise ValidationError("field 'framework.labels': expected an object mapping faces to labels")
        labels = {}
        for key, lab in raw.items():
            try:
                labels[parse_face_key(key, m)] = Label(str(lab).lower())
            except ValueError:
                raise ValidationError(f"field 'framework.labels': unknown label {lab!r}") from None
        return TensegrityFramework(k, m, labels, Flavor.CUSTOM)
    return build_framework(dep, k, Flavor.parse(spec.get("flavor", "G")))


def framework_dict(fw: TensegrityFramework) -> dict:
    return {
        "k": fw.k,
        "flavor": fw.flavor.value,
        "labels": {face_key(f): lab.value for f, lab in fw.labels.items()},
    }


def configuration_dict(config: PointConfiguration) -> dict:
    return {
        "space": config.space.value,
        "dimension": config.n,
        "labels": list(config.labels),
        "points": config.points,
    }


def csv_text(rows, header=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def flatten(d, prefix="") -> list:
    """``(key.path, value)`` pairs for CSV output of a nested report."""
    out = []
    d = _plain(d)
    if isinstance(d, dict):
        for k, v in d.items():
            out.extend(flatten(v, f"{prefix}{k}."))
    elif isinstance(d, list) and any(isinstance(v, (dict, list)) for v in d):
        for i, v in enumerate(d):
            out.extend(flatten(v, f"{prefix}{i}."))
    elif isinstance(d, list):
        out.append((prefix[:-1], " ".join(format_float(v) if isinstance(v, float) else str(v) for v in d)))
    else:
        out.append((prefix[:-1], d))
    return out
