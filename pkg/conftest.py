# Root conftest.py - controls test collection

collect_ignore_glob = [
    "examples/*",
]
