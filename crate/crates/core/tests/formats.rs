mod common;

use std::fs;

use common::{textured, write_test_mosaic};
use rawforge::config::ExperimentConfig;
use rawforge::kernels::{gaussian_kernel, load_psf, motion_kernel, write_psf};
use rawforge::raw::io::{read_mosaic, read_praw, write_mosaic, write_praw};
use rawforge::ErrorKind;

#[test]
fn praw_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.praw"), dir.path().join("b.praw"));
    write_praw(&a, &textured(4, 37, 23)).unwrap();
    write_praw(&b, &read_praw(&a).unwrap()).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn mosaic_and_sidecar_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write_test_mosaic(dir.path(), "first", 8, 20, 14);
    let m = read_mosaic(dir.path().join("first.pgm")).unwrap();
    write_mosaic(dir.path().join("second.pgm"), &m).unwrap();
    for ext in ["pgm", "meta"] {
        let a = fs::read(dir.path().join(format!("first.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("second.{ext}"))).unwrap();
        assert_eq!(a, b, ".{ext} differs");
    }
}

#[test]
fn psf_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, k) in [gaussian_kernel(1.1, 0.4, 0.9, 9).unwrap(), motion_kernel(4.5, 0.7, 7).unwrap()]
        .iter()
        .enumerate()
    {
        let (a, b) = (dir.path().join(format!("{i}a.psf")), dir.path().join(format!("{i}b.psf")));
        write_psf(&a, k).unwrap();
        write_psf(&b, &load_psf(&a).unwrap()).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}

#[test]
fn missing_sidecar_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    write_test_mosaic(dir.path(), "img", 1, 8, 8);
    let meta = dir.path().join("img.meta");
    let text = fs::read_to_string(&meta).unwrap();
    let without: String = text.lines().filter(|l| !l.starts_with("white_level")).map(|l| format!("{l}\n")).collect();
    fs::write(&meta, without).unwrap();
    let err = read_mosaic(dir.path().join("img.pgm")).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Format);
    assert!(err.to_string().contains("white_level"), "{err}");
}

#[test]
fn missing_sidecar_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    write_test_mosaic(dir.path(), "img", 1, 8, 8);
    fs::remove_file(dir.path().join("img.meta")).unwrap();
    let err = read_mosaic(dir.path().join("img.pgm")).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Io);
    assert!(err.to_string().contains("img.meta"), "{err}");
}

#[test]
fn truncated_praw_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.praw");
    write_praw(&path, &textured(1, 6, 6)).unwrap();
    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
    assert_eq!(read_praw(&path).unwrap_err().kind(), ErrorKind::Format);
}

#[test]
fn experiment_config_resolves_relative_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("noise.txt"),
        "[profile]\nname = bench\nlambda_s_min = 0.001\nlambda_s_max = 0.002\nlambda_r_min = 0.0001\nlambda_r_max = 0.0002\n",
    )
    .unwrap();
    write_psf(dir.path().join("lens.psf"), &gaussian_kernel(0.8, 0.8, 0.0, 5).unwrap()).unwrap();
    let cfg_path = dir.path().join("exp.toml");
    fs::write(
        &cfg_path,
        r#"
noise_registry = "noise.txt"

[degradation]
level = "II"
scale = 4
seed = 12

[degradation.kernels]
psf_files = ["lens.psf"]

[patch]
size = 128
stride = 64
"#,
    )
    .unwrap();
    let cfg = ExperimentConfig::load(&cfg_path).unwrap();
    assert_eq!(cfg.degradation.scale, 4);
    assert_eq!(cfg.degradation.seed, 12);
    assert_eq!(cfg.degradation.noise.profiles().len(), 1);
    assert_eq!(cfg.degradation.noise.profiles()[0].name, "bench");
    assert_eq!(cfg.degradation.kernels.psf_files, vec![dir.path().join("lens.psf")]);
    assert_eq!((cfg.patch.size, cfg.patch.stride), (128, 64));

    fs::write(&cfg_path, "[degradation]\nlevel = \"II\"\nscale = 1\n").unwrap();
    assert!(ExperimentConfig::load(&cfg_path).is_err());
}
