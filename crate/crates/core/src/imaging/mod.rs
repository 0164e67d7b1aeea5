//! Observed silhouettes by background subtraction and synthetic
//! silhouettes by projecting the fleshed skeleton through a pinhole camera.

mod camera;
mod frame;
pub mod io;
mod raster;

pub use camera::{CameraModel, CameraSpec};
pub use frame::{extract_silhouette, GrayFrame, SilhouetteImage};
pub(crate) use frame::check_size;
pub use raster::{
    project_stadiums, rasterize_full, rasterize_window, render_silhouette, stadium_bounds,
    PixelRect, Stadium,
};

/// Default background-subtraction threshold (of 255).
pub const DEFAULT_THRESHOLD: u8 = 30;
