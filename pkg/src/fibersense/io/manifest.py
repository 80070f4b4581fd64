"""Run manifests: artifact names, sizes and content hashes.

Manifests make determinism checkable without storing large arrays: two runs
agree iff their manifests are byte-identical. Paths are stored relative to
the manifest location and entries are sorted, so the JSON is canonical.
"""

import hashlib
import json
import os

from ..errors import FormatError

SCHEMA = "mf1"


def hash_file(path, chunk_bytes=1 << 22):
    sha = hashlib.sha256()
    with open(path, "rb") as fh:
        while True:
            block = fh.read(chunk_bytes)
            if not block:
                break
            sha.update(block)
    return sha.hexdigest()


def write_manifest(path, artifacts):
    """Write a manifest.

    ``artifacts``: mapping of name -> {"path": relative path, "sha256": ...,
    "bytes": ...}. Entries missing a hash are hashed here.
    """
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for name in sorted(artifacts):
        info = dict(artifacts[name])
        rel = info["path"]
        if "sha256" not in info or "bytes" not in info:
            full = os.path.join(base, rel)
            info["sha256"] = hash_file(full)
            info["bytes"] = os.path.getsize(full)
        entries.append({"name": name, "path": rel,
                        "bytes": int(info["bytes"]), "sha256": info["sha256"]})
    doc = {"schema": SCHEMA, "artifacts": entries}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SCHEMA:
        raise FormatError(f"{path}: not a {SCHEMA} manifest")
    return {e["name"]: e for e in doc["artifacts"]}


def verify_manifest(path):
    """Re-hash every artifact; returns list of mismatched names."""
    base = os.path.dirname(os.path.abspath(path))
    bad = []
    for name, entry in read_manifest(path).items():
        full = os.path.join(base, entry["path"])
        if not os.path.exists(full) or hash_file(full) != entry["sha256"]:
            bad.append(name)
    return bad
