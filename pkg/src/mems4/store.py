"""On-disk result store: deterministic run directories, atomic writes.

Layout per run: <out>/<command>-<confighash>/ containing config.json plus
branch.jsonl, profiles/*.csv, certificates/*.json, tables/*.csv as the
command produces them.  Every JSON artifact carries a schema_version
field and every CSV starts with a header row; no timestamps are written,
so reruns with identical configuration are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from mems4.closed_forms import format_rational, rational_to_decimal

SCHEMA_VERSION = 1


def rational_json(x: Fraction) -> dict:
    """Bit-exact fraction string plus a 17-digit decimal for humans."""
    return {"fraction": format_rational(x), "decimal": rational_to_decimal(x)}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, obj: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(obj)
    atomic_write_text(path, canonical_json(payload))


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_jsonl(path: Path, records: list[dict]) -> None:
    lines = [json.dumps(r, sort_keys=True) for r in records]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def run_directory(out_root: Path, command: str, config_dict: dict) -> Path:
    """Deterministic per-run directory keyed by the canonical config."""
    digest = hashlib.sha256(canonical_json(config_dict).encode()).hexdigest()[:10]
    run = out_root / f"{command}-{digest}"
    run.mkdir(parents=True, exist_ok=True)
    return run


def default_out_root() -> Path:
    env = os.environ.get("MEMS4_OUT")
    return Path(env) if env else Path("mems4-out")
