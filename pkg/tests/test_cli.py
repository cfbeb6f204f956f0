import json

import pytest

from pcuic.cli import main

from .helpers import CORPUS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def corpus(name: str) -> str:
    return str(CORPUS / name)


class TestCheck:
    def test_nat_ok(self, capsys):
        code, out, _ = run(capsys, "check", corpus("nat.pcuic"))
        assert code == 0
        assert "nat_ind" in out

    @pytest.mark.parametrize(
        "name", ["lists.pcuic", "ftree.pcuic", "sum.pcuic", "eta.pcuic"]
    )
    def test_positive_corpus(self, capsys, name):
        code, _, _ = run(capsys, "check", corpus(name))
        assert code == 0

    def test_type_in_type_fails(self, capsys):
        code, _, err = run(capsys, "check", corpus("type_in_type.pcuic"))
        assert code == 1
        assert "universe-inconsistency" in err

    def test_positivity_failure_kind(self, capsys):
        code, _, err = run(capsys, "check", corpus("neg_positivity.pcuic"))
        assert code == 1
        assert "strict-positivity" in err

    def test_parse_error_is_usage(self, capsys, tmp_path):
        bad = tmp_path / "bad.pcuic"
        bad.write_text("axiom x Prop.")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2

    def test_missing_file_is_usage(self, capsys):
        code, _, _ = run(capsys, "check", "no/such/file.pcuic")
        assert code == 2

    def test_keep_going_reports_later_declarations(self, capsys, tmp_path):
        f = tmp_path / "two_errors.pcuic"
        f.write_text(
            "def bad : Type@{0} := Type@{0}.\n#check Prop.\n"
        )
        code, out, _ = run(capsys, "check", str(f))
        assert code == 1 and "Prop" not in out
        code, out, _ = run(capsys, "check", "--keep-going", str(f))
        assert code == 1 and "Prop : Type@{0}" in out

    def test_json_schema_and_determinism(self, capsys):
        code1, out1, _ = run(capsys, "check", "--json", corpus("nat.pcuic"))
        code2, out2, _ = run(capsys, "check", "--json", corpus("nat.pcuic"))
        assert code1 == code2 == 0
        r1, r2 = json.loads(out1), json.loads(out2)
        for r in (r1, r2):
            assert set(r) == {"file", "status", "declarations"}
            for d in r["declarations"]:
                assert set(d) == {
                    "index", "kind", "name", "status", "output", "error", "elapsed_ms",
                }
        def without_timings(r):
            for d in r["declarations"]:
                d.pop("elapsed_ms")
            return r

        assert json.dumps(without_timings(r1)) == json.dumps(without_timings(r2))

    def test_json_error_payload(self, capsys):
        code, out, _ = run(capsys, "check", "--json", corpus("neg_prop_arity.pcuic"))
        assert code == 1
        r = json.loads(out)
        assert r["status"] == "error"
        err = r["declarations"][0]["error"]
        assert err["kind"] == "block-ill-formed"
        assert err["sub_kind"] == "arity-sort-prop"


class TestEval:
    def test_add(self, capsys):
        code, out, _ = run(
            capsys, "eval", corpus("nat.pcuic"), "-e", "add two three"
        )
        assert code == 0
        assert out.strip() == "N.succ (N.succ (N.succ (N.succ (N.succ N.zero))))"

    def test_prop(self, capsys):
        code, out, _ = run(capsys, "eval", corpus("nat.pcuic"), "-e", "Prop")
        assert code == 0 and out.strip() == "Prop"

    def test_length(self, capsys):
        code, out, _ = run(
            capsys, "eval", corpus("lists.pcuic"), "-e",
            "length nat (L0.cons nat zero (L0.nil nat))",
        )
        assert code == 0 and out.strip() == "N.succ N.zero"

    def test_expression_count_enforced(self, capsys):
        code, _, _ = run(capsys, "eval", corpus("nat.pcuic"), "-e", "a", "-e", "b")
        assert code == 2


class TestConvSub:
    def test_conv_true(self, capsys):
        code, out, _ = run(
            capsys, "conv", corpus("nat.pcuic"), "-e", "add two three", "-e", "five"
        )
        assert code == 0 and "true" in out

    def test_conv_false(self, capsys):
        code, out, _ = run(
            capsys, "conv", corpus("nat.pcuic"), "-e", "zero", "-e", "one"
        )
        assert code == 1 and "false" in out

    def test_sub_true_with_trace(self, capsys):
        code, out, _ = run(
            capsys, "sub", corpus("lists.pcuic"), "--trace-subtyping",
            "-e", "L0.list A", "-e", "L1.list A",
        )
        assert code == 0 and "C-Ind" in out

    def test_sub_false(self, capsys):
        code, out, _ = run(
            capsys, "sub", corpus("nat.pcuic"), "-e", "Type@{1}", "-e", "Type@{0}"
        )
        assert code == 1 and "false" in out


class TestOracle:
    def test_nat_agreement(self, capsys):
        code, out, _ = run(capsys, "oracle", corpus("oracle_nat.cfg"))
        assert code == 0
        assert "agree: 5 = 5 [ok]" in out
        assert "closed: true" in out

    def test_empty_rule_set(self, capsys):
        code, out, _ = run(capsys, "oracle", corpus("oracle_empty.cfg"))
        assert code == 0
        assert out.splitlines()[0] == "stages: 0"
        assert "closed: true" in out

    def test_depth_exhausted(self, capsys):
        code, _, err = run(capsys, "oracle", corpus("oracle_nat_shallow.cfg"))
        assert code == 1
        assert "depth-1" in err or "truncation" in err

    def test_list_param_config(self, capsys):
        code, out, _ = run(capsys, "oracle", corpus("oracle_list.cfg"))
        assert code == 0
        assert "agree: 2 = 2 [ok]" in out


class TestMoreCorpus:
    def test_church_encodings(self, capsys):
        code, out, _ = run(capsys, "check", corpus("church.pcuic"))
        assert code == 0
        assert "Prop-in-Type" in out

    def test_clist_nonuniform_recursion_accepted(self, capsys):
        code, out, _ = run(capsys, "check", corpus("clist.pcuic"))
        assert code == 0

    def test_fuel_flag_reports_exhaustion(self, capsys):
        code, _, err = run(capsys, "check", "--fuel", "3", corpus("nat.pcuic"))
        assert code == 1
        assert "fuel-exhausted" in err
