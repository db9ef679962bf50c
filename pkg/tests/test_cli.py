"""End-to-end tests for the command-line front end."""

from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from repshield import (CameraMount, DepthFrame, Trajectory, intrinsics_for_fov,
                       save_depth_frame)
from repshield.harness.cli import main
from repshield.repulsion import save_trajectory
from repshield.sim import WorldModel, save_world


@pytest.fixture
def arena_world(tmp_path):
    w = WorldModel(bounds=(0.0, 0.0, 6.0, 4.0), bounds_solid=False,
                   start=(1.0, 2.0, 0.0), goals=np.array([[3.0, 2.0]]))
    path = tmp_path / "arena.world"
    save_world(w, path)
    return path


def test_explore_runs_and_prints_summary(arena_world, capsys):
    rc = main(["explore", "--world", str(arena_world), "--trials", "2",
               "--seed", "1", "--max-time", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "task=exploration shield=1 trials=2" in out
    assert "path_length=" in out


def test_explore_writes_artifact_tree(arena_world, tmp_path, capsys):
    out_dir = tmp_path / "results"
    rc = main(["explore", "--world", str(arena_world), "--trials", "2",
               "--max-time", "2", "--out", str(out_dir)])
    capsys.readouterr()
    assert rc == 0
    assert (out_dir / "report.csv").read_text().startswith("metric,value")
    trials = (out_dir / "trials.csv").read_text().splitlines()
    assert len(trials) == 3
    for trial in range(2):
        traj = out_dir / "logs" / f"trial_{trial:03d}.traj.csv"
        dec = out_dir / "logs" / f"trial_{trial:03d}.dec.csv"
        assert traj.read_text().startswith("t,x,y,heading,")
        assert dec.read_text().startswith("t,v,omega,")


def test_no_shield_skips_decision_logs(arena_world, tmp_path, capsys):
    out_dir = tmp_path / "baseline"
    rc = main(["explore", "--world", str(arena_world), "--no-shield",
               "--trials", "1", "--max-time", "2", "--out", str(out_dir)])
    assert rc == 0
    assert "shield=0" in capsys.readouterr().out
    assert (out_dir / "logs" / "trial_000.traj.csv").exists()
    assert not (out_dir / "logs" / "trial_000.dec.csv").exists()


def test_goal_run_arrives(arena_world, capsys):
    rc = main(["goal", "--world", str(arena_world), "--trials", "2",
               "--seed", "0", "--max-time", "20"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "arrival_rate=1.000" in out


def test_goal_run_on_bundled_world(capsys):
    rc = main(["goal", "--world", "corridor_empty", "--trials", "1",
               "--max-time", "120"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "arrival_rate=1.000" in out


def test_dynamic_scenario_runs(capsys):
    rc = main(["dynamic", "--scenario", "side_appear", "--trials", "1",
               "--max-time", "2"])
    assert rc == 0
    assert "task=dynamic_obstacle" in capsys.readouterr().out


def test_replay_to_stdout_and_file(tmp_path, capsys):
    # Three frames of a frontal wall stepping closer each frame.
    intr = intrinsics_for_fov(9, 3, 90.0)
    mount = CameraMount(height_m=0.3, fov_deg=90.0)
    frames_dir = tmp_path / "frames"
    frames_dir.mkdir()
    for k, dist in enumerate((0.9, 0.7, 0.5)):
        depths = np.full((3, 9), dist)
        save_depth_frame(DepthFrame(depths, intr, mount),
                         frames_dir / f"frame_{k}.df1")
    traj_path = tmp_path / "straight.tj1"
    save_trajectory(Trajectory(np.column_stack((np.arange(1, 9) * 0.25,
                                                np.zeros(8)))), traj_path)

    rc = main(["replay", "--frames", str(frames_dir),
               "--trajectory", str(traj_path)])
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert rc == 0
    assert lines[0].startswith("t,v,omega,")
    assert len(lines) == 4
    # A wall dead ahead must not pass through.
    assert all(line.split(",")[6] == "0" for line in lines[1:])

    log_path = tmp_path / "replay.csv"
    rc = main(["replay", "--frames", str(frames_dir),
               "--trajectory", str(traj_path), "--out", str(log_path)])
    assert rc == 0
    assert log_path.read_text() == out


def test_replay_with_config_override(tmp_path, capsys):
    intr = intrinsics_for_fov(5, 2, 90.0)
    mount = CameraMount(height_m=0.3, fov_deg=90.0)
    frames_dir = tmp_path / "frames"
    frames_dir.mkdir()
    save_depth_frame(DepthFrame(np.full((2, 5), 0.8), intr, mount),
                     frames_dir / "f.df1")
    traj_path = tmp_path / "t.tj1"
    save_trajectory(Trajectory(np.array([[0.5, 0.0]])), traj_path)
    cfg_path = tmp_path / "tight.cfg"
    cfg_path.write_text("tau_z = 0.5\n")
    rc = main(["replay", "--frames", str(frames_dir), "--trajectory",
               str(traj_path), "--config", str(cfg_path)])
    out = capsys.readouterr().out
    assert rc == 0
    # The wall at 0.8 m sits beyond the tightened sensing range.
    assert out.splitlines()[1].split(",")[6] == "1"


def test_replay_empty_frames_dir_errors(tmp_path, capsys):
    frames_dir = tmp_path / "frames"
    frames_dir.mkdir()
    traj_path = tmp_path / "t.tj1"
    save_trajectory(Trajectory(np.array([[0.5, 0.0]])), traj_path)
    rc = main(["replay", "--frames", str(frames_dir),
               "--trajectory", str(traj_path)])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error:")


def test_unknown_world_errors(capsys):
    rc = main(["goal", "--world", "atlantis", "--trials", "1"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error:")


def test_missing_subcommand_and_bad_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["explore", "--warp-speed"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_console_script_entry_point(arena_world):
    proc = subprocess.run(
        [sys.executable, "-m", "repshield.harness.cli", "explore", "--world",
         str(arena_world), "--trials", "1", "--max-time", "1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "task=exploration" in proc.stdout
