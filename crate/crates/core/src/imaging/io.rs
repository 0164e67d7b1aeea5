//! Reading and writing frames and masks. PGM (P5) always; PNG with the `png`
//! feature. Color inputs are converted to 8-bit grayscale.

use std::path::{Path, PathBuf};

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder};

use super::frame::{GrayFrame, SilhouetteImage};
use crate::error::{Error, Result};

pub fn read_gray(path: &Path) -> Result<GrayFrame> {
    let img = image::open(path)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?
        .into_luma8();
    let (w, h) = img.dimensions();
    GrayFrame::new(w as usize, h as usize, img.into_raw())
}

pub fn write_pgm(path: &Path, width: usize, height: usize, data: &[u8]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let writer = std::io::BufWriter::new(file);
    PnmEncoder::new(writer)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(data, width as u32, height as u32, ExtendedColorType::L8)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })
}

pub fn write_gray(path: &Path, frame: &GrayFrame) -> Result<()> {
    write_pgm(path, frame.width(), frame.height(), frame.data())
}

/// Writes a mask as PGM with 0 = background and 255 = foreground.
pub fn write_silhouette(path: &Path, mask: &SilhouetteImage) -> Result<()> {
    let data: Vec<u8> = mask.mask().iter().map(|&m| if m { 255 } else { 0 }).collect();
    write_pgm(path, mask.width(), mask.height(), &data)
}

/// Reads a mask; any nonzero pixel is foreground.
pub fn read_silhouette(path: &Path) -> Result<SilhouetteImage> {
    let g = read_gray(path)?;
    let mask = g.data().iter().map(|&v| v != 0).collect();
    SilhouetteImage::from_mask(g.width(), g.height(), mask)
}

fn is_frame_extension(ext: &str) -> bool {
    let ext = ext.to_ascii_lowercase();
    ext == "pgm" || (cfg!(feature = "png") && ext == "png")
}

/// Numbered frame files in `dir`, ordered by their trailing number. Files
/// whose stem does not end in a digit (a background image, say) are skipped.
pub fn list_frames(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut frames = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !is_frame_extension(ext) {
            continue;
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        let digits: String = stem
            .chars()
            .rev()
            .take_while(|c| c.is_ascii_digit())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        if digits.is_empty() {
            continue;
        }
        let number: u128 = digits.parse().unwrap_or(u128::MAX);
        frames.push((number, path));
    }
    frames.sort();
    Ok(frames.into_iter().map(|(_, p)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_roundtrip_and_listing() {
        let dir = tempfile::tempdir().unwrap();
        let frame = GrayFrame::new(3, 2, vec![0, 10, 20, 30, 40, 255]).unwrap();
        for name in ["frame_10.pgm", "frame_2.pgm", "background.pgm", "notes.txt"] {
            write_gray(&dir.path().join(name), &frame).unwrap();
        }
        assert_eq!(read_gray(&dir.path().join("frame_2.pgm")).unwrap(), frame);
        let bytes = std::fs::read(dir.path().join("frame_2.pgm")).unwrap();
        assert!(bytes.starts_with(b"P5"));

        let listed = list_frames(dir.path()).unwrap();
        let names: Vec<_> = listed.iter().map(|p| p.file_name().unwrap().to_str().unwrap()).collect();
        assert_eq!(names, ["frame_2.pgm", "frame_10.pgm"]);
    }

    #[test]
    fn silhouette_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let mask = SilhouetteImage::from_mask(2, 2, vec![true, false, false, true]).unwrap();
        let path = dir.path().join("m.pgm");
        write_silhouette(&path, &mask).unwrap();
        assert_eq!(read_silhouette(&path).unwrap(), mask);
        assert_eq!(read_gray(&path).unwrap().data(), &[255, 0, 0, 255]);
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(read_gray(Path::new("/nonexistent/x.pgm")).is_err());
        assert!(list_frames(Path::new("/nonexistent")).is_err());
    }
}
