from __future__ import annotations

import re


def id_sort_key(member_id: str) -> tuple:
    """Natural ordering for member ids: ``"2" < "10"``, ``"2.1" < "10.0"``."""
    parts = re.split(r"(\d+)", member_id)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p)
