"""File formats, hashing, replay verification, and the command line."""

import subprocess
import sys

import pytest

from equifan.cli import main
from equifan.complexes import Complex
from equifan.fanio import (
    FanFile,
    ParseError,
    complex_hash,
    fan_from_complex,
    fan_hash,
    parse_certificate,
    parse_fan,
    verify_certificate,
    write_certificate,
    write_fan,
)
from equifan.groups import generate_group
from equifan.resolve import resolve_equivariant

from conftest import CYC3, SWAP2, corpus, orthant, singular_cone_2d


class TestFanFormat:
    def test_round_trip(self):
        for name, cx in corpus():
            fan = fan_from_complex(cx)
            text = write_fan(fan)
            again = parse_fan(text)
            assert write_fan(again) == text, name
            assert again.to_complex() == cx, name

    def test_round_trip_with_group(self, orthant2):
        fan = fan_from_complex(orthant2, [SWAP2])
        again = parse_fan(write_fan(fan))
        assert again.group_generators == (SWAP2,)

    def test_comments_and_blank_lines(self):
        text = "# a fan\nrank 2\n\nrays 2\n1 0\n0 1   # basis\ncones 1\n0 1\n"
        fan = parse_fan(text)
        assert fan.ambient_rank == 2

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ParseError) as err:
            parse_fan("rank 2\nrays 1\n1 0 0\ncones 0\n")
        assert "line 3" in str(err.value)
        with pytest.raises(ParseError, match="out of range"):
            parse_fan("rank 2\nrays 1\n1 0\ncones 1\n0 3\n")
        with pytest.raises(ParseError, match="expected"):
            parse_fan("rays 2\n1 0\n0 1\n")

    def test_hash_is_semantic(self):
        a = "rank 2\nrays 2\n1 0\n0 1\ncones 1\n0 1\n"
        b = "# comment\nrank 2\nrays 2\n1 0\n0 1\n\ncones 1\n1 0\n"
        assert fan_hash(parse_fan(a)) == fan_hash(parse_fan(b))

    def test_determinism(self):
        sing = singular_cone_2d(3)
        fan = fan_from_complex(sing)
        assert write_fan(fan) == write_fan(fan_from_complex(sing))


class TestCertificateFormat:
    def test_round_trip(self):
        sing = singular_cone_2d(3)
        cert = resolve_equivariant(sing, mode="plain")
        fan = fan_from_complex(sing)
        text = write_certificate(cert, fan)
        data = parse_certificate(text)
        assert data.mode == "plain"
        assert data.group_order == 1
        assert len(data.stages) == len(cert.stages)
        assert data.composite == cert.composite.ray_values

    def test_verify_accepts_fresh_certificates(self):
        cases = [
            (singular_cone_2d(2), None, "plain"),
            (singular_cone_2d(5), None, "plain"),
            (orthant(2), [SWAP2], "canonical"),
            (orthant(3), [CYC3], "canonical"),
            (singular_cone_2d(4), None, "canonical"),
        ]
        for cx, gens, mode in cases:
            elements = generate_group(gens) if gens else None
            cert = resolve_equivariant(cx, elements, mode=mode)
            fan = fan_from_complex(cx, gens or ())
            text = write_certificate(cert, fan)
            violations = verify_certificate(parse_certificate(text), fan)
            assert violations == [], (mode, violations)

    def test_wrong_input_rejected(self):
        sing = singular_cone_2d(2)
        cert = resolve_equivariant(sing, mode="plain")
        fan = fan_from_complex(sing)
        text = write_certificate(cert, fan)
        other = fan_from_complex(singular_cone_2d(3))
        violations = verify_certificate(parse_certificate(text), other)
        assert any("certificate/input mismatch" in v for v in violations)

    def test_byte_determinism(self):
        sing = singular_cone_2d(3)
        fan = fan_from_complex(sing)
        t1 = write_certificate(resolve_equivariant(sing, mode="plain"), fan)
        t2 = write_certificate(resolve_equivariant(sing, mode="plain"), fan)
        assert t1 == t2
        g = generate_group([CYC3])
        fan3 = fan_from_complex(orthant(3), [CYC3])
        c1 = write_certificate(resolve_equivariant(orthant(3), g), fan3)
        c2 = write_certificate(resolve_equivariant(orthant(3), g), fan3)
        assert c1 == c2

    def test_rational_values_rejected(self):
        sing = singular_cone_2d(2)
        cert = resolve_equivariant(sing, mode="plain")
        fan = fan_from_complex(sing)
        lines = write_certificate(cert, fan).splitlines()
        idx = next(i for i, l in enumerate(lines) if lines[i - 1].startswith("composite"))
        rid, val = lines[idx].split()
        lines[idx] = f"{rid} {val}/2"
        with pytest.raises(ParseError, match="integers"):
            parse_certificate("\n".join(lines) + "\n")

    def test_tampered_value_named(self):
        sing = singular_cone_2d(2)
        cert = resolve_equivariant(sing, mode="plain")
        fan = fan_from_complex(sing)
        lines = write_certificate(cert, fan).splitlines()
        # bump one composite value
        idx = next(i for i, l in enumerate(lines) if lines[i - 1].startswith("composite"))
        rid, val = lines[idx].split()
        lines[idx] = f"{rid} {int(val) + 1}"
        data = parse_certificate("\n".join(lines) + "\n")
        violations = verify_certificate(data, fan)
        assert violations
        assert any("composite" in v for v in violations)


def run_cli(*args):
    return main(list(args))


class TestCli:
    def test_validate_ok(self, tmp_path, capsys):
        fan = fan_from_complex(orthant(2), [SWAP2])
        path = tmp_path / "orth.fan"
        path.write_text(write_fan(fan))
        assert run_cli("validate", str(path)) == 0
        assert "valid" in capsys.readouterr().out

    def test_validate_overlap_fails(self, tmp_path, capsys):
        path = tmp_path / "bad.fan"
        path.write_text("rank 2\nrays 4\n1 0\n1 2\n1 1\n0 1\ncones 2\n0 1\n2 3\n")
        assert run_cli("validate", str(path)) == 1
        assert "violation" in capsys.readouterr().out

    def test_validate_parse_error(self, tmp_path, capsys):
        path = tmp_path / "junk.fan"
        path.write_text("rank two\n")
        assert run_cli("validate", str(path)) == 2

    def test_barycentric_writes_complex(self, tmp_path):
        src = tmp_path / "in.fan"
        dst = tmp_path / "out.fan"
        src.write_text(write_fan(fan_from_complex(orthant(3))))
        assert run_cli("barycentric", str(src), "-o", str(dst)) == 0
        out = parse_fan(dst.read_text())
        assert len(out.cones) == 6

    def test_star_center_outside(self, tmp_path, capsys):
        src = tmp_path / "in.fan"
        src.write_text(write_fan(fan_from_complex(orthant(2))))
        assert run_cli("star", str(src), "--center=-1,0") == 1
        assert "center not in support" in capsys.readouterr().err

    def test_resolve_verify_cycle(self, tmp_path, capsys):
        src = tmp_path / "in.fan"
        cert_path = tmp_path / "out.cert"
        src.write_text(write_fan(fan_from_complex(singular_cone_2d(2))))
        assert run_cli("resolve", str(src), "--mode", "plain", "-o", str(cert_path)) == 0
        out = capsys.readouterr().out
        assert "measure trace" in out and "flags" in out
        assert run_cli("verify", str(cert_path), str(src)) == 0
        # tamper: verify against a different fan
        other = tmp_path / "other.fan"
        other.write_text(write_fan(fan_from_complex(singular_cone_2d(3))))
        assert run_cli("verify", str(cert_path), str(other)) == 1

    def test_resolve_canonical_with_group(self, tmp_path):
        src = tmp_path / "in.fan"
        cert_path = tmp_path / "out.cert"
        src.write_text(write_fan(fan_from_complex(orthant(2), [SWAP2])))
        assert run_cli("resolve", str(src), "-o", str(cert_path)) == 0
        assert run_cli("verify", str(cert_path), str(src)) == 0

    def test_orbits(self, tmp_path, capsys):
        src = tmp_path / "in.fan"
        src.write_text(write_fan(fan_from_complex(orthant(3), [CYC3])))
        assert run_cli("orbits", str(src)) == 0
        out = capsys.readouterr().out
        assert "group order 3" in out

    def test_report(self, tmp_path, capsys):
        src = tmp_path / "in.fan"
        src.write_text(write_fan(fan_from_complex(singular_cone_2d(2))))
        assert run_cli("report", str(src)) == 0
        out = capsys.readouterr().out
        assert "smooth: no" in out

    def test_entry_point_subprocess(self, tmp_path):
        src = tmp_path / "in.fan"
        src.write_text(write_fan(fan_from_complex(orthant(2))))
        proc = subprocess.run(
            [sys.executable, "-m", "equifan.cli", "validate", str(src)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "valid" in proc.stdout

    def test_group_cap_env(self, tmp_path, capsys, monkeypatch):
        src = tmp_path / "in.fan"
        src.write_text(write_fan(fan_from_complex(orthant(3), [CYC3, ((0, 1, 0), (1, 0, 0), (0, 0, 1))])))
        monkeypatch.setenv("EQUIFAN_GROUP_CAP", "3")
        assert run_cli("orbits", str(src)) == 1
        assert "cap" in capsys.readouterr().err
