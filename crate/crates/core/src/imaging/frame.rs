use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Input(format!("frame must be at least 1x1, got {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::Dimension {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(GrayFrame { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Binary foreground mask, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SilhouetteImage {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl SilhouetteImage {
    pub fn empty(width: usize, height: usize) -> Self {
        SilhouetteImage {
            width,
            height,
            mask: vec![false; width * height],
        }
    }

    pub fn from_mask(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != width * height {
            return Err(Error::Dimension {
                expected: width * height,
                actual: mask.len(),
            });
        }
        Ok(SilhouetteImage { width, height, mask })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.mask[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn same_size(&self, other: &SilhouetteImage) -> Result<()> {
        check_size((self.width, self.height), (other.width, other.height))
    }

    /// Pixelwise OR.
    pub fn union(&self, other: &SilhouetteImage) -> Result<SilhouetteImage> {
        self.same_size(other)?;
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect();
        Ok(SilhouetteImage {
            width: self.width,
            height: self.height,
            mask,
        })
    }
}

pub(crate) fn check_size(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ImageSize {
            left_width: a.0,
            left_height: a.1,
            right_width: b.0,
            right_height: b.1,
        })
    }
}

/// Foreground where `|frame - background| > threshold`.
pub fn extract_silhouette(
    frame: &GrayFrame,
    background: &GrayFrame,
    threshold: u8,
) -> Result<SilhouetteImage> {
    check_size((frame.width, frame.height), (background.width, background.height))?;
    let mask = frame
        .data
        .iter()
        .zip(&background.data)
        .map(|(&f, &b)| f.abs_diff(b) > threshold)
        .collect();
    Ok(SilhouetteImage {
        width: frame.width,
        height: frame.height,
        mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_frames_give_empty_mask() {
        let f = GrayFrame::filled(8, 6, 100).unwrap();
        let s = extract_silhouette(&f, &f, 30).unwrap();
        assert_eq!(s.count(), 0);
    }

    #[test]
    fn single_pixel_just_over_threshold() {
        let bg = GrayFrame::filled(8, 6, 100).unwrap();
        let mut f = bg.clone();
        f.data_mut()[3 * 8 + 5] = 131;
        let s = extract_silhouette(&f, &bg, 30).unwrap();
        assert_eq!(s.count(), 1);
        assert!(s.get(5, 3));
        // exactly at threshold is background
        f.data_mut()[3 * 8 + 5] = 130;
        assert_eq!(extract_silhouette(&f, &bg, 30).unwrap().count(), 0);
    }

    #[test]
    fn checkerboard() {
        let (w, h) = (10, 8);
        let bg = GrayFrame::filled(w, h, 50).unwrap();
        let data: Vec<u8> = (0..w * h)
            .map(|i| if (i % w + i / w) % 2 == 0 { 200 } else { 50 })
            .collect();
        let f = GrayFrame::new(w, h, data.clone()).unwrap();
        let s = extract_silhouette(&f, &bg, 100).unwrap();
        // oracle: count differing pixels directly
        let differing = data.iter().filter(|&&v| v != 50).count();
        assert_eq!(s.count(), differing);
        assert_eq!(s.count(), w * h / 2);
        for y in 0..h {
            for x in 0..w {
                assert_eq!(s.get(x, y), (x + y) % 2 == 0);
            }
        }
    }

    #[test]
    fn size_mismatch() {
        let a = GrayFrame::filled(4, 4, 0).unwrap();
        let b = GrayFrame::filled(4, 5, 0).unwrap();
        assert!(matches!(extract_silhouette(&a, &b, 10), Err(Error::ImageSize { .. })));
        assert!(GrayFrame::new(0, 3, vec![]).is_err());
        assert!(GrayFrame::new(2, 2, vec![0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_and_monotone(
            pixels in prop::collection::vec((any::<u8>(), any::<u8>()), 36),
            t1 in any::<u8>(),
            t2 in any::<u8>(),
        ) {
            let (a, b): (Vec<u8>, Vec<u8>) = pixels.into_iter().unzip();
            let fa = GrayFrame::new(6, 6, a).unwrap();
            let fb = GrayFrame::new(6, 6, b).unwrap();
            prop_assert_eq!(
                extract_silhouette(&fa, &fb, t1).unwrap(),
                extract_silhouette(&fb, &fa, t1).unwrap()
            );
            let (lo, hi) = (t1.min(t2), t1.max(t2));
            prop_assert!(
                extract_silhouette(&fa, &fb, hi).unwrap().count()
                    <= extract_silhouette(&fa, &fb, lo).unwrap().count()
            );
        }
    }
}
