"""Contract-identity checksum for duplicate detection.

Two contracts count as duplicates when their MD5 digests agree after every
space and horizontal-tab character is removed. Newlines and carriage returns
are kept, so reformatting that moves code across lines changes the key.
"""

from __future__ import annotations

import hashlib


def dedup_key(text: str) -> str:
    stripped = text.replace(" ", "").replace("\t", "")
    return hashlib.md5(stripped.encode("utf-8")).hexdigest()
