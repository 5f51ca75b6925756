import json
import hashlib
from typing import Any, Dict, Iterable, Optional


def compute_entry_hash(prev_hash: str, entry_data: Dict[str, Any]) -> str:
    """
    Compute hash for a verification record using a hash chain
    entry_hash = SHA256(prev_hash || canonical_json(entry_without_hashes))
    """
    # Canonical JSON (sorted keys, no whitespace)
    canonical_json = json.dumps(entry_data, sort_keys=True, separators=(",", ":"), default=str)
    combined = prev_hash + canonical_json
    return hashlib.sha256(combined.encode("utf-8")).hexdigest()


def chain_entry(entry_data: Dict[str, Any], prev_hash: Optional[str] = None) -> Dict[str, Any]:
    """
    Attach prev/entry hashes to a record. Empty string is the genesis hash.
    """
    if prev_hash is None:
        prev_hash = ""
    entry_hash = compute_entry_hash(prev_hash, entry_data)
    return {**entry_data, "prev_hash_hex": prev_hash, "entry_hash_hex": entry_hash}


def verify_chain(entries: Iterable[Dict[str, Any]]) -> Optional[int]:
    """
    Recompute the chain. Returns the index of the first broken entry, or None
    when every link checks out.
    """
    expected_prev = ""
    for i, entry in enumerate(entries):
        data = {k: v for k, v in entry.items() if k not in ("prev_hash_hex", "entry_hash_hex")}
        if entry.get("prev_hash_hex") != expected_prev:
            return i
        if compute_entry_hash(expected_prev, data) != entry.get("entry_hash_hex"):
            return i
        expected_prev = entry["entry_hash_hex"]
    return None
