import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from siexport.basis import SI_SZV_BUNDLED, Shell
from siexport.export import (
    ExportSpec,
    export,
    hf_energy_from_tables,
    hubbard_dimer_document,
    spin_orbital_tables,
    write_document,
)
from siexport.lattice import Cell, ewald_energy, fcc_si_cell, kpath
from siexport.pseudo import SI_GTH_PADE_Q4
from siexport.scf import (
    ExportError,
    build_integrals,
    electronic_energy_from_mo,
    mo_integrals,
    rhf,
)

REPO_FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"

MADELUNG_NACL = 1.7475645946331822


@pytest.fixture(scope="module")
def si_setup():
    cell = fcc_si_cell(5.43)
    shells = [(pos, sh) for pos in cell.positions for sh in SI_SZV_BUNDLED]
    pseudos = [(pos, SI_GTH_PADE_Q4) for pos in cell.positions]
    return cell, shells, pseudos


@pytest.fixture(scope="module")
def gamma_scf(si_setup):
    cell, shells, pseudos = si_setup
    integrals = build_integrals(cell, shells, pseudos, (0.0, 0.0, 0.0), 60.0)
    return cell, integrals, rhf(integrals, n_occ=4)


def test_ewald_nacl_madelung():
    d = 1.0
    a = 2.0 * d
    vectors = 0.5 * a * np.array([[0.0, 1, 1], [1, 0, 1], [1, 1, 0]])
    frac = np.array([[0, 0, 0], [0.5, 0.5, 0.5]])
    cell = Cell(vectors=vectors, positions=frac @ vectors, charges=np.array([1.0, -1.0]))
    assert ewald_energy(cell) == pytest.approx(-MADELUNG_NACL / d, abs=1e-10)


def test_kpath_monotone(si_setup):
    cell, _, _ = si_setup
    path = kpath(cell, ("L", "Gamma", "X"))
    distances = [d for _, _, d in path]
    assert distances[0] == 0.0
    assert distances == sorted(distances)
    assert path[1][1] == (0.0, 0.0, 0.0)


def test_integral_symmetries(gamma_scf):
    _, integrals, _ = gamma_scf
    s, h, eri = integrals.overlap, integrals.hcore, integrals.eri
    assert np.max(np.abs(s - s.conj().T)) < 1e-12
    assert np.max(np.abs(h - h.conj().T)) < 1e-12
    assert np.min(np.linalg.eigvalsh(s)) > 0
    # chemist-integral complex symmetry (pq|rs) = conj((qp|sr)), (pq|rs) = (rs|pq)
    assert np.max(np.abs(eri - np.conj(eri.transpose(1, 0, 3, 2)))) < 1e-12
    assert np.max(np.abs(eri - eri.transpose(2, 3, 0, 1))) < 1e-12


def test_scf_energy_two_routes(gamma_scf):
    _, integrals, scf = gamma_scf
    h_mo, eri_mo = mo_integrals(scf, integrals)
    assert electronic_energy_from_mo(h_mo, eri_mo, 4) == pytest.approx(scf.e_elec, abs=1e-9)


def test_time_reversal_pair(si_setup):
    cell, shells, pseudos = si_setup
    up = rhf(build_integrals(cell, shells, pseudos, (0.5, 0.5, 0.5), 50.0), 4).e_elec
    down = rhf(build_integrals(cell, shells, pseudos, (-0.5, -0.5, -0.5), 50.0), 4).e_elec
    assert up == pytest.approx(down, abs=1e-10)


def test_translation_invariance(si_setup):
    # limited by grid discretization, not by the formulation
    cell, shells, pseudos = si_setup
    reference = rhf(build_integrals(cell, shells, pseudos, (0.5, 0.5, 0.5), 60.0), 4).e_elec
    reference += ewald_energy(cell)
    shift = np.array([0.31, -0.17, 0.53])
    moved = Cell(vectors=cell.vectors, positions=cell.positions + shift, charges=cell.charges)
    shells2 = [(pos, sh) for pos in moved.positions for sh in SI_SZV_BUNDLED]
    pseudos2 = [(pos, SI_GTH_PADE_Q4) for pos in moved.positions]
    shifted = rhf(build_integrals(moved, shells2, pseudos2, (0.5, 0.5, 0.5), 60.0), 4).e_elec
    shifted += ewald_energy(moved)
    assert shifted == pytest.approx(reference, abs=1e-5)


def test_parseval_guard_on_coarse_mesh(si_setup):
    cell, _, pseudos = si_setup
    tight = Shell(l=0, exponents=(8.0,), coefficients=(1.0,))
    shells = [(pos, tight) for pos in cell.positions]
    with pytest.raises(ExportError, match="Nyquist"):
        build_integrals(cell, shells, pseudos, (0.0, 0.0, 0.0), 8.0)


def test_spin_orbital_tables_hermitian_and_hf(gamma_scf):
    cell, integrals, scf = gamma_scf
    h_mo, eri_mo = mo_integrals(scf, integrals)
    one_body, two_body, orbitals = spin_orbital_tables(h_mo, eri_mo, 4)
    for (p, q), value in one_body.items():
        assert one_body[(q, p)] == pytest.approx(value.conjugate(), abs=1e-12)
    for (p, q, r, s), value in two_body.items():
        assert two_body[(s, r, q, p)] == pytest.approx(value.conjugate(), abs=1e-12)
    occupied = [o["index"] for o in orbitals if o["hf_occupied"]]
    e_total = scf.e_elec + ewald_energy(cell)
    assert hf_energy_from_tables(ewald_energy(cell), one_body, two_body, occupied) == pytest.approx(
        e_total, abs=1e-9
    )


def test_hubbard_bypass_matches_bundled_fixture(tmp_path):
    bundled = REPO_FIXTURES / "hubbard_dimer.json"
    out = tmp_path / "hubbard_dimer.json"
    write_document(hubbard_dimer_document(), out)
    assert out.read_bytes() == bundled.read_bytes()


def test_hubbard_bypass_via_cli(tmp_path):
    from siexport.cli import main

    out = tmp_path / "dimer.json"
    assert main(["hubbard", "--out", str(out)]) == 0
    assert out.read_bytes() == (REPO_FIXTURES / "hubbard_dimer.json").read_bytes()


@pytest.fixture(scope="module")
def exported_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("export")
    spec = ExportSpec(k_labels=("L", "X", "W"), output_dir=str(out))
    manifest = export(spec)
    return out, manifest


def test_export_written_files(exported_run):
    out, manifest = exported_run
    for label in ("L", "X", "W"):
        assert (out / f"si_{label}.json").is_file()
    assert manifest["backend"]["name"] == "siexport"
    doc = json.loads((out / "si_L.json").read_text())
    assert doc["n_spin_orbitals"] == 16
    assert doc["n_electrons"] == 8
    assert sum(o["hf_occupied"] for o in doc["orbitals"]) == 8


def test_real_gauge_at_time_reversal_invariant_k(exported_run):
    out, _ = exported_run
    for label, expect_real in (("L", True), ("X", True), ("W", False)):
        doc = json.loads((out / f"si_{label}.json").read_text())
        max_imag = max(abs(row[5]) for row in doc["two_body"])
        if expect_real:
            assert max_imag == 0.0, f"{label} should be exported in the real gauge"


def test_export_reingestion_via_consumer_cli(exported_run):
    out, manifest = exported_run
    files = [str(out / f"si_{label}.json") for label in ("L", "X", "W")]
    result = subprocess.run(
        [sys.executable, "-m", "qsciband.cli", "validate", *files],
        capture_output=True,
        text=True,
        check=True,
    )
    report = json.loads(result.stdout)
    for path, entry in report.items():
        assert entry["valid"], f"{path}: {entry}"
        assert entry["momentum_ok"]
        label = entry["k_label"]
        assert entry["hf_energy"] == pytest.approx(
            manifest["k_points"][label]["hf_energy"], abs=1e-8
        )


def test_regenerated_fixtures_match_committed(exported_run):
    out, _ = exported_run
    for name in ("si_L.json", "si_X.json", "si_W.json"):
        committed = json.loads((REPO_FIXTURES / name).read_text())
        fresh = json.loads((out / name).read_text())
        assert fresh["constant"] == pytest.approx(committed["constant"], abs=1e-8)
        committed_one = {tuple(row[:2]): complex(row[2], row[3]) for row in committed["one_body"]}
        fresh_one = {tuple(row[:2]): complex(row[2], row[3]) for row in fresh["one_body"]}
        assert committed_one.keys() == fresh_one.keys()
        assert all(abs(fresh_one[k] - committed_one[k]) < 1e-8 for k in fresh_one)
        committed_two = {tuple(row[:4]): complex(row[4], row[5]) for row in committed["two_body"]}
        fresh_two = {tuple(row[:4]): complex(row[4], row[5]) for row in fresh["two_body"]}
        assert committed_two.keys() == fresh_two.keys()
        assert all(abs(fresh_two[k] - committed_two[k]) < 1e-8 for k in fresh_two)


def test_bad_spec_rejected():
    with pytest.raises(ExportError):
        ExportSpec(lattice_constant_angstrom=-1.0)
    with pytest.raises(ExportError):
        ExportSpec(k_labels=())
    with pytest.raises(ExportError):
        ExportSpec(basis="dzvp")
