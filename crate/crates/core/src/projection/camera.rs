use nalgebra::{Matrix3, Matrix3x4, Matrix4, Vector3, Vector4};

use crate::error::{LaneError, Result};
use crate::geometry::Point3;

/// Pinhole camera: intrinsics, ego-to-camera extrinsics and image size.
///
/// The camera frame is x right, y down, z forward (depth).
#[derive(Debug, Clone, PartialEq)]
pub struct CameraRig {
    intrinsic: Matrix3<f64>,
    extrinsic: Matrix4<f64>,
    image_h: u32,
    image_w: u32,
}

impl CameraRig {
    pub fn new(
        intrinsic: Matrix3<f64>,
        extrinsic: Matrix4<f64>,
        image_h: u32,
        image_w: u32,
    ) -> Result<Self> {
        let k = &intrinsic;
        if k.iter().any(|v| !v.is_finite()) || extrinsic.iter().any(|v| !v.is_finite()) {
            return Err(LaneError::InvalidRig("non-finite matrix entry".into()));
        }
        if k[(1, 0)] != 0.0 || k[(2, 0)] != 0.0 || k[(2, 1)] != 0.0 {
            return Err(LaneError::InvalidRig(
                "intrinsic matrix is not upper triangular".into(),
            ));
        }
        if !(k[(0, 0)] > 0.0 && k[(1, 1)] > 0.0) {
            return Err(LaneError::InvalidRig(
                "focal lengths must be positive".into(),
            ));
        }
        if k[(2, 2)] != 1.0 {
            return Err(LaneError::InvalidRig("intrinsic[2][2] must be 1".into()));
        }
        let rot = extrinsic.fixed_view::<3, 3>(0, 0);
        if ((rot.transpose() * rot) - Matrix3::identity()).abs().max() > 1e-6 {
            return Err(LaneError::InvalidRig(
                "extrinsic rotation is not orthonormal".into(),
            ));
        }
        if extrinsic.row(3) != Vector4::new(0.0, 0.0, 0.0, 1.0).transpose() {
            return Err(LaneError::InvalidRig(
                "extrinsic last row must be [0, 0, 0, 1]".into(),
            ));
        }
        if image_h == 0 || image_w == 0 {
            return Err(LaneError::InvalidRig("image size must be positive".into()));
        }
        Ok(Self {
            intrinsic,
            extrinsic,
            image_h,
            image_w,
        })
    }

    /// A level camera at `height` meters above the ego origin looking along +Y.
    pub fn forward_facing(
        focal: (f64, f64),
        principal: (f64, f64),
        height: f64,
        image_h: u32,
        image_w: u32,
    ) -> Result<Self> {
        #[rustfmt::skip]
        let intrinsic = Matrix3::new(
            focal.0, 0.0, principal.0,
            0.0, focal.1, principal.1,
            0.0, 0.0, 1.0,
        );
        // ego (X right, Y forward, Z up) -> camera (x right, y down, z forward)
        #[rustfmt::skip]
        let rot = Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, 0.0, -1.0,
            0.0, 1.0, 0.0,
        );
        let t = -(rot * Vector3::new(0.0, 0.0, height));
        let mut extrinsic = Matrix4::identity();
        extrinsic.fixed_view_mut::<3, 3>(0, 0).copy_from(&rot);
        extrinsic.fixed_view_mut::<3, 1>(0, 3).copy_from(&t);
        Self::new(intrinsic, extrinsic, image_h, image_w)
    }

    /// 1920x1080 image, 1000 px focal length, mounted 1.5 m high.
    pub fn front_default() -> Self {
        Self::forward_facing((1000.0, 1000.0), (960.0, 540.0), 1.5, 1080, 1920)
            .expect("default rig is valid")
    }

    pub fn intrinsic(&self) -> &Matrix3<f64> {
        &self.intrinsic
    }

    pub fn extrinsic(&self) -> &Matrix4<f64> {
        &self.extrinsic
    }

    pub fn image_h(&self) -> u32 {
        self.image_h
    }

    pub fn image_w(&self) -> u32 {
        self.image_w
    }
}

/// Minimum depth for a point to count as in front of the camera.
pub const MIN_DEPTH: f64 = 1e-6;

/// 3x4 ego-to-pixel projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjMatrix {
    pub m: Matrix3x4<f64>,
}

/// Pixel coordinates with the camera depth kept for back-projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pixel {
    pub u: f64,
    pub v: f64,
    pub depth: f64,
}

/// `intrinsic * extrinsic[0..3, ..]`.
pub fn compose_projection(rig: &CameraRig) -> Result<ProjMatrix> {
    let m = rig.intrinsic * rig.extrinsic.fixed_view::<3, 4>(0, 0);
    let det = m.fixed_view::<3, 3>(0, 0).determinant();
    let scale = m.fixed_view::<3, 3>(0, 0).abs().max().powi(3);
    if !(det.abs() > 1e-12 * scale) {
        return Err(LaneError::InvalidRig(
            "projection matrix is singular".into(),
        ));
    }
    Ok(ProjMatrix { m })
}

/// Projects a homogeneous point `(x, y, z, w)`.
pub fn project_homogeneous(h: &Vector4<f64>, m: &ProjMatrix) -> Result<Pixel> {
    let img = m.m * h;
    let depth = img.z;
    if !(depth > MIN_DEPTH) {
        return Err(LaneError::BehindCamera { depth });
    }
    Ok(Pixel {
        u: img.x / depth,
        v: img.y / depth,
        depth,
    })
}

pub fn project_point(p: &Point3, m: &ProjMatrix) -> Result<Pixel> {
    project_homogeneous(&p.to_homogeneous(), m)
}

pub fn in_image(u: f64, v: f64, h: u32, w: u32) -> bool {
    (0.0..w as f64).contains(&u) && (0.0..h as f64).contains(&v)
}

/// Inverse of a [`ProjMatrix`] for pixels that carry their depth.
///
/// With `M = [A | b]`, a pixel `(u, v)` at depth `d` comes from
/// `p = A^-1 ((u d, v d, d) - b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackProjector {
    a_inv: Matrix3<f64>,
    b: Vector3<f64>,
}

impl BackProjector {
    pub fn new(m: &ProjMatrix) -> Result<Self> {
        let a = m.m.fixed_view::<3, 3>(0, 0).into_owned();
        let a_inv = a
            .try_inverse()
            .ok_or_else(|| LaneError::InvalidRig("projection matrix is singular".into()))?;
        Ok(Self {
            a_inv,
            b: m.m.column(3).into_owned(),
        })
    }

    pub fn unproject(&self, px: &Pixel) -> Point3 {
        let img = Vector3::new(px.u * px.depth, px.v * px.depth, px.depth);
        Point3::from(self.a_inv * (img - self.b))
    }
}
