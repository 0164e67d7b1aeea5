//! Projection of the fleshed skeleton into a binary mask.
//!
//! Each rendered segment is a 3D capsule. Its image is a 2D stadium: a thick
//! line between the projected endpoints whose half-width is the
//! perspective-scaled radius at each end, interpolated linearly along the
//! segment, closed by round caps. A pixel is foreground iff its center lies
//! inside at least one stadium.

use super::camera::CameraModel;
use super::frame::SilhouetteImage;
use crate::error::Result;
use crate::kinematics::{ensure_valid, forward_kinematics_unchecked, FleshModel, JointPositions, PoseVector, Skeleton};

/// A projected capsule in continuous pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stadium {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub radius_a: f64,
    pub radius_b: f64,
}

impl Stadium {
    /// Whether the point lies inside (boundary included).
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let dx = self.b[0] - self.a[0];
        let dy = self.b[1] - self.a[1];
        let px = x - self.a[0];
        let py = y - self.a[1];
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            ((px * dx + py * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let r = self.radius_a + t * (self.radius_b - self.radius_a);
        let ex = px - t * dx;
        let ey = py - t * dy;
        ex * ex + ey * ey <= r * r
    }

    /// Pixel index ranges `[x0, x1) x [y0, y1)` whose centers may fall inside,
    /// clipped to a `width x height` image. `None` when nothing is visible.
    pub fn pixel_bounds(&self, width: usize, height: usize) -> Option<PixelRect> {
        let r = self.radius_a.max(self.radius_b);
        let lo_x = self.a[0].min(self.b[0]) - r;
        let hi_x = self.a[0].max(self.b[0]) + r;
        let lo_y = self.a[1].min(self.b[1]) - r;
        let hi_y = self.a[1].max(self.b[1]) + r;
        let x0 = (lo_x - 0.5).ceil().max(0.0);
        let x1 = ((hi_x - 0.5).floor() + 1.0).min(width as f64);
        let y0 = (lo_y - 0.5).ceil().max(0.0);
        let y1 = ((hi_y - 0.5).floor() + 1.0).min(height as f64);
        if !(x0 < x1 && y0 < y1) {
            return None;
        }
        Some(PixelRect {
            x0: x0 as usize,
            x1: x1 as usize,
            y0: y0 as usize,
            y1: y1 as usize,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn union(self, o: PixelRect) -> PixelRect {
        PixelRect {
            x0: self.x0.min(o.x0),
            x1: self.x1.max(o.x1),
            y0: self.y0.min(o.y0),
            y1: self.y1.max(o.y1),
        }
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }
}

/// Projects every rendered segment of a posed skeleton. Segments with an
/// endpoint at or behind the camera plane are dropped.
pub fn project_stadiums(
    skeleton: &Skeleton,
    flesh: &FleshModel,
    joints: &JointPositions,
    camera: &CameraModel,
    out: &mut Vec<Stadium>,
) {
    out.clear();
    for (seg, &radius) in skeleton.segments().iter().zip(flesh.radii()) {
        let ca = camera.to_camera(&joints.get(seg.parent));
        let cb = camera.to_camera(&joints.get(seg.child));
        if !(ca.z > 0.0 && cb.z > 0.0) {
            continue;
        }
        let (ua, va) = camera.project_camera(&ca);
        let (ub, vb) = camera.project_camera(&cb);
        out.push(Stadium {
            a: [ua, va],
            b: [ub, vb],
            radius_a: camera.focal() * radius / ca.z,
            radius_b: camera.focal() * radius / cb.z,
        });
    }
}

/// Union of the stadiums' pixel bounds.
pub fn stadium_bounds(stadiums: &[Stadium], width: usize, height: usize) -> Option<PixelRect> {
    stadiums
        .iter()
        .filter_map(|s| s.pixel_bounds(width, height))
        .reduce(PixelRect::union)
}

/// Rasterizes `stadiums` into a mask covering `rect` of a
/// `width x height` image. `mask` is resized and overwritten.
pub fn rasterize_window(
    stadiums: &[Stadium],
    rect: PixelRect,
    width: usize,
    height: usize,
    mask: &mut Vec<bool>,
) {
    let w = rect.width();
    mask.clear();
    mask.resize(w * rect.height(), false);
    for s in stadiums {
        let Some(b) = s.pixel_bounds(width, height) else {
            continue;
        };
        for y in b.y0..b.y1 {
            let cy = y as f64 + 0.5;
            let row = (y - rect.y0) * w;
            for x in b.x0..b.x1 {
                let cell = &mut mask[row + x - rect.x0];
                if !*cell && s.contains(x as f64 + 0.5, cy) {
                    *cell = true;
                }
            }
        }
    }
}

/// Synthetic silhouette of a posed body as seen by `camera`.
pub fn render_silhouette(
    skeleton: &Skeleton,
    flesh: &FleshModel,
    pose: &PoseVector,
    camera: &CameraModel,
) -> Result<SilhouetteImage> {
    ensure_valid(skeleton, pose)?;
    let joints = forward_kinematics_unchecked(skeleton, pose);
    let mut stadiums = Vec::with_capacity(flesh.radii().len());
    project_stadiums(skeleton, flesh, &joints, camera, &mut stadiums);
    Ok(rasterize_full(&stadiums, camera.width(), camera.height()))
}

/// Rasterizes stadiums over a full image.
pub fn rasterize_full(stadiums: &[Stadium], width: usize, height: usize) -> SilhouetteImage {
    let rect = PixelRect {
        x0: 0,
        x1: width,
        y0: 0,
        y1: height,
    };
    let mut mask = Vec::new();
    rasterize_window(stadiums, rect, width, height, &mut mask);
    SilhouetteImage::from_mask(width, height, mask).expect("mask matches image size")
}
