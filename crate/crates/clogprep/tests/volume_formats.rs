use std::fs;

use clogprep::error::Error;
use clogprep::ply::{parse_ply, read_ply, write_ply};
use clogprep::volume_io::{
    decode_cvol, encode_cvol, frame_path, read_frame_dir, read_volume, write_frame_dir, write_volume,
};
use clogprep_core::pointcloud::{Point, PointCloudSample};
use clogprep_core::VolumeTensor;
use proptest::prelude::*;

fn ramp(w: usize, h: usize, d: usize) -> VolumeTensor {
    VolumeTensor::new(w, h, d, (0..w * h * d * 3).map(|i| (i * 7 % 256) as u8).collect()).unwrap()
}

#[test]
fn three_png_frames_read_as_one_stack() {
    let tmp = tempfile::tempdir().unwrap();
    let v = ramp(4, 4, 3);
    write_frame_dir(&v, tmp.path()).unwrap();
    let back = read_frame_dir(tmp.path()).unwrap();
    assert_eq!(back.dims(), (4, 4, 3));
    assert_eq!(back.data().len(), 144);
    assert_eq!(back, v);
    assert_eq!(read_volume(tmp.path()).unwrap(), v);
}

#[test]
fn gap_in_frame_numbering_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    write_frame_dir(&ramp(4, 4, 3), tmp.path()).unwrap();
    fs::rename(frame_path(tmp.path(), 1), frame_path(tmp.path(), 5)).unwrap();
    assert!(matches!(read_frame_dir(tmp.path()), Err(Error::MissingFrames { index: 1, .. })));
}

#[test]
fn mismatched_frame_size_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    write_frame_dir(&ramp(4, 4, 2), tmp.path()).unwrap();
    let other = tempfile::tempdir().unwrap();
    write_frame_dir(&ramp(5, 4, 1), other.path()).unwrap();
    fs::copy(frame_path(other.path(), 0), frame_path(tmp.path(), 1)).unwrap();
    assert!(matches!(read_frame_dir(tmp.path()), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn empty_directory_is_empty_volume() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(matches!(read_frame_dir(tmp.path()), Err(Error::EmptyVolume { .. })));
}

#[test]
fn cvol_file_round_trip_and_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("v.cvol");
    let v = ramp(3, 2, 2);
    write_volume(&v, &path).unwrap();
    assert_eq!(read_volume(&path).unwrap(), v);

    let mut bytes = fs::read(&path).unwrap();
    bytes.pop();
    assert!(matches!(decode_cvol(&bytes, &path), Err(Error::CorruptContainer { .. })));
    bytes[0] = b'X';
    assert!(matches!(decode_cvol(&bytes, &path), Err(Error::BadMagic { .. })));
}

#[test]
fn ply_file_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("c.ply");
    let pc = PointCloudSample::new(vec![(Point::new(0, 1, 2), [1, 2, 3]), (Point::new(4, 0, 0), [250, 0, 9])], (5, 5, 5))
        .unwrap();
    write_ply(&pc, &path).unwrap();
    let entries = read_ply(&path).unwrap();
    let again = PointCloudSample::new(entries, (5, 5, 5)).unwrap();
    assert_eq!(again, pc);
    assert!(parse_ply("").is_err());
}

proptest! {
    #[test]
    fn cvol_bytes_survive_decode_encode(w in 1usize..9, h in 1usize..9, d in 1usize..5, seed in any::<u64>()) {
        let data: Vec<u8> = (0..w * h * d * 3).map(|i| (seed.wrapping_mul(i as u64 + 1) >> 13) as u8).collect();
        let v = VolumeTensor::new(w, h, d, data).unwrap();
        let bytes = encode_cvol(&v);
        prop_assert_eq!(bytes.len(), 24 + w * h * d * 3);
        let back = decode_cvol(&bytes, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(encode_cvol(&back), bytes);
        prop_assert_eq!(back, v);
    }
}
