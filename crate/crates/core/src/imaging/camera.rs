use nalgebra::{Matrix3, Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ideal pinhole camera. `rotation` and `translation` map world points into
/// the camera frame (`x` right, `y` down, `z` along the optical axis).
#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel {
    focal: f64,
    principal: (f64, f64),
    width: usize,
    height: usize,
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl CameraModel {
    pub fn new(
        focal: f64,
        principal: (f64, f64),
        width: usize,
        height: usize,
        rotation: Matrix3<f64>,
        translation: Vector3<f64>,
    ) -> Result<Self> {
        if !(focal > 0.0) || !focal.is_finite() {
            return Err(Error::Camera(format!("focal length must be > 0, got {focal}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::Camera(format!("image must be at least 1x1, got {width}x{height}")));
        }
        let err = (rotation * rotation.transpose() - Matrix3::identity()).abs().max();
        if !(err <= 1e-9) {
            return Err(Error::Camera(format!(
                "rotation is not orthonormal (|R R^T - I| = {err:e})"
            )));
        }
        if !translation.iter().all(|v| v.is_finite()) {
            return Err(Error::Camera("translation must be finite".into()));
        }
        Ok(CameraModel {
            focal,
            principal,
            width,
            height,
            rotation,
            translation,
        })
    }

    /// Camera at world position `(x, eye_height, distance)` looking down the
    /// world `-z` axis, so subjects walking along `+x` cross the image left to
    /// right. Principal point at the image center.
    pub fn side_view(
        width: usize,
        height: usize,
        focal: f64,
        x: f64,
        eye_height: f64,
        distance: f64,
    ) -> Result<Self> {
        let rotation = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);
        let center = Vector3::new(x, eye_height, distance);
        Self::new(
            focal,
            (width as f64 / 2.0, height as f64 / 2.0),
            width,
            height,
            rotation,
            -(rotation * center),
        )
    }

    /// Camera at `eye` aimed at `target`, with world `+y` appearing up in the
    /// image. Principal point at the image center.
    pub fn look_at(
        width: usize,
        height: usize,
        focal: f64,
        eye: Point3<f64>,
        target: Point3<f64>,
    ) -> Result<Self> {
        let forward = (target - eye)
            .try_normalize(1e-12)
            .ok_or_else(|| Error::Camera("eye and target coincide".into()))?;
        let right = forward
            .cross(&Vector3::y())
            .try_normalize(1e-9)
            .ok_or_else(|| Error::Camera("viewing direction is vertical".into()))?;
        let down = forward.cross(&right);
        let rotation = Matrix3::from_rows(&[right.transpose(), down.transpose(), forward.transpose()]);
        Self::new(
            focal,
            (width as f64 / 2.0, height as f64 / 2.0),
            width,
            height,
            rotation,
            -(rotation * eye.coords),
        )
    }

    pub fn focal(&self) -> f64 {
        self.focal
    }

    pub fn principal(&self) -> (f64, f64) {
        self.principal
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    pub fn to_camera(&self, point: &Point3<f64>) -> Vector3<f64> {
        self.rotation * point.coords + self.translation
    }

    /// Continuous pixel coordinates of a world point.
    pub fn project_point(&self, point: &Point3<f64>) -> Result<(f64, f64)> {
        let c = self.to_camera(point);
        if !(c.z > 0.0) {
            return Err(Error::BehindCamera(c.z));
        }
        Ok(self.project_camera(&c))
    }

    pub(crate) fn project_camera(&self, c: &Vector3<f64>) -> (f64, f64) {
        (
            self.principal.0 + self.focal * c.x / c.z,
            self.principal.1 + self.focal * c.y / c.z,
        )
    }
}

/// Serialized camera description used in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSpec {
    pub focal: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<[f64; 2]>,
    pub width: usize,
    pub height: usize,
    /// Row-major world-to-camera rotation.
    pub rotation: [[f64; 3]; 3],
    /// World-to-camera translation, meters.
    pub translation: [f64; 3],
}

impl CameraSpec {
    pub fn to_model(&self) -> Result<CameraModel> {
        let r = &self.rotation;
        let rotation = Matrix3::new(
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
        );
        let principal = self
            .principal
            .map(|p| (p[0], p[1]))
            .unwrap_or((self.width as f64 / 2.0, self.height as f64 / 2.0));
        CameraModel::new(
            self.focal,
            principal,
            self.width,
            self.height,
            rotation,
            Vector3::from(self.translation),
        )
    }

    pub fn from_model(camera: &CameraModel) -> Self {
        let r = camera.rotation();
        CameraSpec {
            focal: camera.focal(),
            principal: Some([camera.principal().0, camera.principal().1]),
            width: camera.width(),
            height: camera.height(),
            rotation: [
                [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
                [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
                [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
            ],
            translation: (*camera.translation()).into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn look_at_matches_side_view() {
        let a = CameraModel::side_view(320, 240, 300.0, 0.5, 1.0, 5.0).unwrap();
        let b = CameraModel::look_at(320, 240, 300.0, Point3::new(0.5, 1.0, 5.0), Point3::new(0.5, 1.0, 0.0)).unwrap();
        assert!((a.rotation() - b.rotation()).abs().max() < 1e-12);
        assert!((a.translation() - b.translation()).abs().max() < 1e-12);

        let c = CameraModel::look_at(320, 240, 300.0, Point3::new(3.0, 2.5, 4.0), Point3::new(0.0, 0.9, 0.0)).unwrap();
        let (u, v) = c.project_point(&Point3::new(0.0, 0.9, 0.0)).unwrap();
        assert!((u - 160.0).abs() < 1e-9 && (v - 120.0).abs() < 1e-9);
        let (_, v_up) = c.project_point(&Point3::new(0.0, 1.5, 0.0)).unwrap();
        assert!(v_up < v);
        assert!(CameraModel::look_at(32, 24, 30.0, Point3::new(0.0, 5.0, 0.0), Point3::origin()).is_err());
    }

    fn axis_camera(focal: f64) -> CameraModel {
        CameraModel::new(
            focal,
            (160.0, 120.0),
            320,
            240,
            Matrix3::identity(),
            Vector3::zeros(),
        )
        .unwrap()
    }

    #[test]
    fn optical_axis_hits_principal_point() {
        let cam = axis_camera(500.0);
        for z in [0.1, 1.0, 37.5] {
            assert_eq!(cam.project_point(&Point3::new(0.0, 0.0, z)).unwrap(), (160.0, 120.0));
        }
    }

    #[test]
    fn lateral_offset() {
        let cam = axis_camera(500.0);
        // depth focal/100 = 5 m; 500 * 1 / 5 = 100 px
        let (u, v) = cam.project_point(&Point3::new(1.0, 0.0, 5.0)).unwrap();
        assert!((u - 260.0).abs() < 1e-12);
        assert_eq!(v, 120.0);
    }

    #[test]
    fn behind_camera() {
        let cam = axis_camera(500.0);
        assert!(matches!(
            cam.project_point(&Point3::new(0.0, 0.0, -1.0)),
            Err(Error::BehindCamera(z)) if z == -1.0
        ));
        assert!(cam.project_point(&Point3::new(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn side_view_geometry() {
        let cam = CameraModel::side_view(320, 240, 300.0, 0.0, 1.0, 5.0).unwrap();
        let (u, v) = cam.project_point(&Point3::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!((u, v), (160.0, 120.0));
        let (u, _) = cam.project_point(&Point3::new(1.0, 1.0, 0.0)).unwrap();
        assert!(u > 160.0);
        let (_, v) = cam.project_point(&Point3::new(0.0, 2.0, 0.0)).unwrap();
        assert!(v < 120.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(CameraModel::new(500.0, (0.0, 0.0), 10, 10, bad, Vector3::zeros()).is_err());
        assert!(CameraModel::new(0.0, (0.0, 0.0), 10, 10, Matrix3::identity(), Vector3::zeros()).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let cam = CameraModel::side_view(320, 240, 300.0, 0.5, 1.0, 5.0).unwrap();
        assert_eq!(CameraSpec::from_model(&cam).to_model().unwrap(), cam);
    }
}
