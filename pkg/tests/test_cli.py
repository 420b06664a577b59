import io as _io
import json

import pytest

from helpers import example_f1, random_walk, rng

from exceptional_toric import io
from exceptional_toric.classes import blowup_line_bundle_sequence, p2_sequence
from exceptional_toric.cli import BUDGET, DOMAIN, OK, PARSE, main


def run(argv):
    buf = _io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else io.dumps(obj))
    return str(p)


def seq_file(tmp_path, seq, name="seq.json"):
    return write(tmp_path, name, io.sequence_to_json(seq))


def test_validate_ok(tmp_path):
    code, out = run(["validate", seq_file(tmp_path, example_f1())])
    rep = json.loads(out)
    assert code == OK and rep["ok"] and rep["t"] == 1 and rep["offending_pairs"] == []


def test_validate_names_offending_pair(tmp_path):
    d = io.sequence_to_json(p2_sequence())
    d["objects"][2]["c1"] = [5]
    code, out = run(["validate", write(tmp_path, "bad.json", d)])
    rep = json.loads(out)
    assert code == DOMAIN and not rep["ok"] and rep["offending_pairs"] == [[3, 1], [3, 2]]


def test_parse_errors(tmp_path):
    assert run(["validate", write(tmp_path, "a.json", "{not json")])[0] == PARSE
    assert run(["validate", str(tmp_path / "missing.json")])[0] == PARSE
    d = io.sequence_to_json(p2_sequence())
    d["objects"][0]["c1"] = [1, 2]
    assert run(["validate", write(tmp_path, "b.json", d)])[0] == PARSE
    d["surface"] = {"model": "torus"}
    assert run(["validate", write(tmp_path, "c.json", d)])[0] == PARSE


def test_custom_surface_failing_lattice_checks(tmp_path):
    d = {"surface": {"model": "custom", "gram": [[1, 0], [0, 1]], "K": [-3, 1]},
         "objects": [{"rank": 1, "c1": [0, 0], "c2": 0}]}
    assert run(["validate", write(tmp_path, "s.json", d)])[0] == DOMAIN


def test_mutate_round_trip_is_byte_identical(tmp_path):
    src = seq_file(tmp_path, example_f1())
    code, out = run(["mutate", src, "--pos", "2", "--dir", "left"])
    assert code == OK and "toric_system" in json.loads(out)
    d = json.loads(out)
    d.pop("toric_system")
    mid = write(tmp_path, "mid.json", d)
    code, out = run(["mutate", mid, "--pos", "2", "--dir", "right"])
    d = json.loads(out)
    d.pop("toric_system")
    assert code == OK and io.dumps(d) == open(src).read()


def test_mutate_position_out_of_range(tmp_path):
    src = seq_file(tmp_path, p2_sequence())
    assert run(["mutate", src, "--pos", "3", "--dir", "left"])[0] == DOMAIN
    assert run(["mutate", src, "--pos", "0", "--dir", "left"])[0] == DOMAIN


def test_fan_and_svg(tmp_path):
    svg = tmp_path / "fan.svg"
    code, out = run(["fan", seq_file(tmp_path, example_f1()), "--svg", str(svg)])
    fan = json.loads(out)
    assert code == OK and fan["winding"] == 1 and len(fan["rays"]) == 3
    assert svg.read_text().lstrip().startswith("<svg")


def test_reduce_targets_and_budget(tmp_path):
    seq, _, _ = random_walk(blowup_line_bundle_sequence(1), 10, rng(5))
    src = seq_file(tmp_path, seq)
    code, out = run(["reduce", src])
    cert = json.loads(out)
    assert code == OK and cert["tag"] in ("markov-triple", "rank-one-zero")
    code, out = run(["reduce", src, "--target", "rank-one"])
    cert = json.loads(out)
    assert code == OK and all(o["rank"] == 1 for o in cert["normalized"]["objects"])
    assert cert["fan"]["winding"] == 1
    code, out = run(["reduce", seq_file(tmp_path, example_f1(), "ex.json"),
                     "--target", "rank-one", "--budget", "1"])
    cert = json.loads(out)
    assert code == BUDGET and cert["partial"] and len(cert["steps"]) == 1


def test_markov(tmp_path):
    code, out = run(["markov", "--max", "30"])
    assert code == OK and len(json.loads(out)["triples"]) == 5
    assert run(["markov", "--max", "0"])[0] == DOMAIN


def test_resolve():
    code, out = run(["resolve", "--v", "9", "--k", "2"])
    rep = json.loads(out)
    assert code == OK and rep["bs"] == [5, 2] and rep["T"] and rep["volumes"] == [9, 2, 1]
    assert run(["resolve", "--v", "4", "--k", "2"])[0] == DOMAIN


def test_ksquare(tmp_path):
    f = write(tmp_path, "p114.json", {"rays": [[1, 0], [0, 1], [-1, -4]]})
    code, out = run(["ksquare", f])
    assert code == OK and out == "9\n"
    code, out = run(["ksquare", seq_file(tmp_path, blowup_line_bundle_sequence(2))])
    assert code == OK and out == "7\n"
    f = write(tmp_path, "wind.json", {"rays": [[1, 0], [0, 1], [-1, 0], [0, -1]] * 2})
    assert run(["ksquare", f])[0] == DOMAIN


@pytest.mark.parametrize("seq", [p2_sequence(), example_f1(), blowup_line_bundle_sequence(3)])
def test_file_formats_are_stable(seq):
    text = io.dumps(io.sequence_to_json(seq))
    assert io.dumps(io.sequence_to_json(io.parse_sequence(json.loads(text)))) == text
    from exceptional_toric.gale import fan_of_sequence
    fan = fan_of_sequence(seq)
    d = io.fan_to_json(fan)
    again = io.fan_to_json(io.parse_fan(json.loads(io.dumps(d))))
    assert again["rays"] == d["rays"] and again["K2"] == d["K2"]
