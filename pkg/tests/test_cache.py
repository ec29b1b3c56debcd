import json

from freestar.cache import ResultCache


def test_key_depends_on_every_field(tmp_path):
    c = ResultCache(tmp_path, "v1")
    k = c.key("R1", "growth", {"n": 3})
    assert k == c.key("R1", "growth", {"n": 3})
    assert k != c.key("R1", "growth", {"n": 4})
    assert k != c.key("R1", "homology", {"n": 3})
    assert k != c.key("RSTAR(2)", "growth", {"n": 3})
    assert k != ResultCache(tmp_path, "v2").key("R1", "growth", {"n": 3})


def test_roundtrip_and_hit(tmp_path):
    c = ResultCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"records": [1, 2, 3]}

    assert c.fetch("R1", "op", {"n": 1}, compute) == {"records": [1, 2, 3]}
    assert c.fetch("R1", "op", {"n": 1}, compute) == {"records": [1, 2, 3]}
    assert len(calls) == 1
    entry = json.loads(next(tmp_path.glob("*.json")).read_text())
    assert set(entry) == {"key", "checksum", "payload"}


def test_corrupted_entry_is_recomputed(tmp_path):
    c = ResultCache(tmp_path)
    c.fetch("R1", "op", {}, lambda: {"x": 1})
    path = next(tmp_path.glob("*.json"))
    entry = json.loads(path.read_text())
    entry["payload"]["x"] = 999
    path.write_text(json.dumps(entry))
    assert c.get(c.key("R1", "op", {})) is None
    assert not path.exists()
    assert c.fetch("R1", "op", {}, lambda: {"x": 1}) == {"x": 1}


def test_garbage_file_is_discarded(tmp_path):
    c = ResultCache(tmp_path)
    k = c.key("R1", "op", {})
    c.path(k).write_text("not json")
    assert c.get(k) is None
    assert c.fetch("R1", "op", {}, lambda: [1]) == [1]
