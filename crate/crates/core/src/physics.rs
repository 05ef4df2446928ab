//! Deterministic fixed-step planar rigid-body simulation: one servoed
//! robot rectangle and one manipulable object (box or cylinder) with
//! robot-object contact, object-ground Coulomb friction and linear drag.
//!
//! The robot is kinematically dominant: contact impulses move the object
//! but never knock the robot off its servoed twist. Restitution is zero;
//! penetration is removed by position projection.
//!
//! Frame conventions: a body's local +x is its forward axis. A rectangle
//! of dimensions `(width, depth)` extends `depth` along local x and
//! `width` along local y. Commanded and actual robot twists are expressed
//! in the robot body frame; object twists are world-frame COM velocities.

use crate::error::{Error, Result};
use crate::math::{angle_diff, wrap_angle, Mat3, Vec2};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Planar pose: position plus yaw, yaw kept in `[0, 2*pi)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Pose2 {
            x,
            y,
            yaw: wrap_angle(yaw),
        }
    }

    pub fn xy(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Transform a point from this body's frame to the world frame.
    pub fn to_world(&self, local: Vec2) -> Vec2 {
        self.xy() + local.rotated(self.yaw)
    }

    /// Transform a world point into this body's frame.
    pub fn to_local(&self, world: Vec2) -> Vec2 {
        (world - self.xy()).rotated(-self.yaw)
    }

    /// Unit x-axis (heading) of this pose in the world frame.
    pub fn heading(&self) -> Vec2 {
        Vec2::new(self.yaw.cos(), self.yaw.sin())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.yaw.is_finite()
    }
}

/// Planar twist: linear velocity plus yaw rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Twist2 {
    pub vx: f64,
    pub vy: f64,
    pub wz: f64,
}

impl Twist2 {
    pub const ZERO: Twist2 = Twist2 {
        vx: 0.0,
        vy: 0.0,
        wz: 0.0,
    };

    pub fn new(vx: f64, vy: f64, wz: f64) -> Self {
        Twist2 { vx, vy, wz }
    }

    pub fn linear(&self) -> Vec2 {
        Vec2::new(self.vx, self.vy)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.vx, self.vy, self.wz]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Twist2::new(a[0], a[1], a[2])
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.wz.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Box,
    Cylinder,
}

/// One randomized manipulable object. `dims` is `[width, depth, height]`;
/// cylinders store `[diameter, diameter, height]`. The inertia tensor is
/// about the COM; planar dynamics use only its zz component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub shape: Shape,
    pub dims: [f64; 3],
    pub mass: f64,
    pub inertia: Mat3,
    /// COM offset from the geometric center, in the object frame.
    pub com_offset: [f64; 3],
    /// Coulomb friction coefficient against the ground (also used at the
    /// robot-object contact).
    pub friction: f64,
    /// Linear drag force coefficient: F = -drag * v.
    pub drag: f64,
}

impl ObjectSpec {
    /// Footprint half-extents: (along local x, along local y).
    pub fn half_extents(&self) -> (f64, f64) {
        match self.shape {
            Shape::Box => (self.dims[1] / 2.0, self.dims[0] / 2.0),
            Shape::Cylinder => (self.dims[0] / 2.0, self.dims[0] / 2.0),
        }
    }

    pub fn height(&self) -> f64 {
        self.dims[2]
    }

    /// Planar COM offset in the object frame.
    pub fn com_xy(&self) -> Vec2 {
        Vec2::new(self.com_offset[0], self.com_offset[1])
    }

    /// Yaw moment of inertia used by the planar dynamics.
    pub fn izz(&self) -> f64 {
        self.inertia.0[2][2]
    }

    /// Principal moments of a uniform body of this shape/mass, `[Ixx, Iyy, Izz]`.
    pub fn principal_inertia(shape: Shape, dims: [f64; 3], mass: f64) -> [f64; 3] {
        match shape {
            Shape::Box => {
                // Local extents: x = depth, y = width, z = height.
                let (ex, ey, ez) = (dims[1], dims[0], dims[2]);
                [
                    mass / 12.0 * (ey * ey + ez * ez),
                    mass / 12.0 * (ex * ex + ez * ez),
                    mass / 12.0 * (ex * ex + ey * ey),
                ]
            }
            Shape::Cylinder => {
                let r = dims[0] / 2.0;
                let h = dims[2];
                let ixx = mass / 12.0 * (3.0 * r * r + h * h);
                [ixx, ixx, mass * r * r / 2.0]
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::invalid_state(format!("mass {} <= 0", self.mass)));
        }
        if self.dims.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::invalid_state(format!("dims {:?} not all > 0", self.dims)));
        }
        if self.friction < 0.0 || self.drag < 0.0 {
            return Err(Error::invalid_state("negative friction or drag".into()));
        }
        if !self.inertia.is_finite() || !self.inertia.is_symmetric(1e-9) {
            return Err(Error::invalid_state("inertia not finite symmetric".into()));
        }
        if !self.inertia.is_positive_definite() {
            return Err(Error::invalid_state("inertia not positive definite".into()));
        }
        if !self.com_inside() {
            return Err(Error::invalid_state(format!(
                "com_offset {:?} outside object volume",
                self.com_offset
            )));
        }
        Ok(())
    }

    fn com_inside(&self) -> bool {
        let [cx, cy, cz] = self.com_offset;
        if cz.abs() > self.dims[2] / 2.0 + 1e-12 {
            return false;
        }
        match self.shape {
            Shape::Box => {
                cx.abs() <= self.dims[1] / 2.0 + 1e-12 && cy.abs() <= self.dims[0] / 2.0 + 1e-12
            }
            Shape::Cylinder => (cx * cx + cy * cy).sqrt() <= self.dims[0] / 2.0 + 1e-12,
        }
    }
}

/// First-order velocity-tracking model standing in for the low-level
/// locomotion controller.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServoModel {
    /// Tracking time constant in seconds.
    pub time_constant: f64,
    pub max_lin_accel: f64,
    pub max_ang_accel: f64,
    /// Per-axis additive Gaussian noise std on the tracked twist (vx, vy, wz).
    pub tracking_noise_std: [f64; 3],
}

impl Default for ServoModel {
    fn default() -> Self {
        ServoModel {
            time_constant: 0.1,
            max_lin_accel: 10.0,
            max_ang_accel: 20.0,
            tracking_noise_std: [0.0; 3],
        }
    }
}

impl ServoModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_constant > 0.0) || !(self.max_lin_accel > 0.0) || !(self.max_ang_accel > 0.0)
        {
            return Err(Error::Config("servo constants must be > 0".into()));
        }
        if self.tracking_noise_std.iter().any(|s| *s < 0.0) {
            return Err(Error::Config("servo noise std must be >= 0".into()));
        }
        Ok(())
    }
}

/// Fixed-step simulation parameters. `1/dt` is the low-level control
/// frequency (100 Hz nominal).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub gravity: f64,
    /// Robot footprint `(width, depth)`: lateral and forward extents.
    pub robot_dims: (f64, f64),
    /// Fraction of penetration removed per step by position projection.
    pub contact_beta: f64,
    /// Penetration left in place to keep resting contacts detectable.
    pub contact_slop: f64,
    pub restitution: f64,
    pub contact_iterations: usize,
    /// Episode faults when the object center leaves `|x|,|y| <= bound`.
    pub workspace_bound: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 0.01,
            gravity: 9.81,
            robot_dims: (0.5, 0.7),
            contact_beta: 0.8,
            contact_slop: 1e-4,
            restitution: 0.0,
            contact_iterations: 8,
            workspace_bound: 20.0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config("dt must be > 0".into()));
        }
        if !(self.robot_dims.0 > 0.0 && self.robot_dims.1 > 0.0) {
            return Err(Error::Config("robot_dims must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.contact_beta) || self.contact_slop < 0.0 {
            return Err(Error::Config("bad contact projection parameters".into()));
        }
        Ok(())
    }

    /// Robot footprint half-extents (along local x, along local y).
    pub fn robot_half_extents(&self) -> (f64, f64) {
        (self.robot_dims.1 / 2.0, self.robot_dims.0 / 2.0)
    }
}

/// Complete dynamic state of one simulated world.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub robot_pose: Pose2,
    /// Robot twist in the robot body frame (vx forward, vy lateral, wz yaw rate).
    pub robot_twist: Twist2,
    /// Object pose of the geometric center.
    pub object_pose: Pose2,
    /// Object twist: world-frame COM velocity plus yaw rate.
    pub object_twist: Twist2,
    pub object: ObjectSpec,
    pub goal_pose: Pose2,
    pub in_contact: bool,
    pub sim_time: f64,
    /// Robot footprint `(width, depth)`, mirrored from `SimConfig`.
    pub robot_dims: (f64, f64),
    /// Sticky flag set when the object leaves the workspace bound.
    pub ejected: bool,
}

impl WorldState {
    /// World position of the object's center of mass.
    pub fn object_com_world(&self) -> Vec2 {
        self.object_pose.xy() + self.object.com_xy().rotated(self.object_pose.yaw)
    }

    /// Object kinetic energy (planar).
    pub fn object_kinetic_energy(&self) -> f64 {
        0.5 * self.object.mass * self.object_twist.linear().norm_sq()
            + 0.5 * self.object.izz() * self.object_twist.wz * self.object_twist.wz
    }
}

/// One contact: world point, unit normal pointing from the robot into the
/// object, and penetration depth (>= 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub point: Vec2,
    pub normal: Vec2,
    pub depth: f64,
}

pub type ContactSet = Vec<Contact>;

/// First-order tracking toward `commanded` with per-axis acceleration caps
/// and optional additive Gaussian tracking noise. All twists are in the
/// robot body frame.
pub fn velocity_servo<R: Rng>(
    current: Twist2,
    commanded: Twist2,
    servo: &ServoModel,
    dt: f64,
    rng: &mut R,
) -> Result<Twist2> {
    if !current.is_finite() || !commanded.is_finite() {
        return Err(Error::invalid_state("non-finite twist into velocity_servo".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid_state(format!("dt {dt} <= 0")));
    }
    let alpha = (dt / servo.time_constant).min(1.0);
    let caps = [
        servo.max_lin_accel * dt,
        servo.max_lin_accel * dt,
        servo.max_ang_accel * dt,
    ];
    let cur = current.as_array();
    let cmd = commanded.as_array();
    let mut out = [0.0; 3];
    for i in 0..3 {
        let step = ((cmd[i] - cur[i]) * alpha).clamp(-caps[i], caps[i]);
        let mut v = cur[i] + step;
        let std = servo.tracking_noise_std[i];
        if std > 0.0 {
            let noise: f64 = Normal::new(0.0, std)
                .map_err(|e| Error::Config(format!("servo noise: {e}")))?
                .sample(rng);
            v += noise;
        }
        out[i] = v;
    }
    let result = Twist2::from_array(out);
    if !result.is_finite() {
        return Err(Error::invalid_state("velocity_servo produced non-finite twist".into()));
    }
    Ok(result)
}

/// Vertices of an oriented rectangle, counter-clockwise.
fn rect_corners(pose: &Pose2, hx: f64, hy: f64) -> [Vec2; 4] {
    [
        pose.to_world(Vec2::new(hx, hy)),
        pose.to_world(Vec2::new(-hx, hy)),
        pose.to_world(Vec2::new(-hx, -hy)),
        pose.to_world(Vec2::new(hx, -hy)),
    ]
}

fn project_rect(corners: &[Vec2; 4], axis: Vec2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in corners {
        let p = c.dot(axis);
        lo = lo.min(p);
        hi = hi.max(p);
    }
    (lo, hi)
}

/// Sutherland-Hodgman clip of `poly` against the half-plane
/// `(p - point) . normal <= 0`.
fn clip_halfplane(poly: &[Vec2], point: Vec2, normal: Vec2) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let da = (a - point).dot(normal);
        let db = (b - point).dot(normal);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

fn polygon_centroid(poly: &[Vec2]) -> Option<Vec2> {
    if poly.is_empty() {
        return None;
    }
    let mut area2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let w = a.cross(b);
        area2 += w;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    if area2.abs() < 1e-12 {
        // Degenerate sliver: fall back to the vertex mean.
        let n = poly.len() as f64;
        let mut m = Vec2::ZERO;
        for p in poly {
            m = m + *p;
        }
        return Some(m * (1.0 / n));
    }
    Some(Vec2::new(cx / (3.0 * area2), cy / (3.0 * area2)))
}

/// Rectangle-rectangle overlap via the separating axis test. Returns the
/// minimum-penetration axis (oriented from rect a toward rect b) and the
/// centroid of the intersection polygon.
fn rect_rect_contact(
    pose_a: &Pose2,
    ha: (f64, f64),
    pose_b: &Pose2,
    hb: (f64, f64),
) -> Option<Contact> {
    let ca = rect_corners(pose_a, ha.0, ha.1);
    let cb = rect_corners(pose_b, hb.0, hb.1);
    let axes = [
        Vec2::new(1.0, 0.0).rotated(pose_a.yaw),
        Vec2::new(0.0, 1.0).rotated(pose_a.yaw),
        Vec2::new(1.0, 0.0).rotated(pose_b.yaw),
        Vec2::new(0.0, 1.0).rotated(pose_b.yaw),
    ];
    let mut min_pen = f64::INFINITY;
    let mut min_axis = axes[0];
    for axis in axes {
        let (alo, ahi) = project_rect(&ca, axis);
        let (blo, bhi) = project_rect(&cb, axis);
        let overlap = ahi.min(bhi) - alo.max(blo);
        if overlap <= 0.0 {
            return None;
        }
        if overlap < min_pen {
            min_pen = overlap;
            min_axis = axis;
        }
    }
    // Orient the normal from a into b.
    let towards = pose_b.xy() - pose_a.xy();
    let normal = if min_axis.dot(towards) >= 0.0 {
        min_axis
    } else {
        -min_axis
    };
    // Intersection polygon: clip b by a's four half-planes.
    let mut poly: Vec<Vec2> = cb.to_vec();
    let a_axes = [
        Vec2::new(1.0, 0.0).rotated(pose_a.yaw),
        Vec2::new(0.0, 1.0).rotated(pose_a.yaw),
    ];
    let half = [ha.0, ha.1];
    for k in 0..2 {
        let n = a_axes[k];
        poly = clip_halfplane(&poly, pose_a.xy() + n * half[k], n);
        if poly.is_empty() {
            return None;
        }
        poly = clip_halfplane(&poly, pose_a.xy() - n * half[k], -n);
        if poly.is_empty() {
            return None;
        }
    }
    let point = polygon_centroid(&poly)?;
    Some(Contact {
        point,
        normal,
        depth: min_pen,
    })
}

/// Rectangle-disc overlap: closest point on the rectangle to the disc center.
fn rect_disc_contact(pose_a: &Pose2, ha: (f64, f64), center: Vec2, radius: f64) -> Option<Contact> {
    let local = pose_a.to_local(center);
    let clamped = Vec2::new(local.x.clamp(-ha.0, ha.0), local.y.clamp(-ha.1, ha.1));
    let diff = local - clamped;
    let d = diff.norm();
    if d > 1e-12 {
        let pen = radius - d;
        if pen <= 0.0 {
            return None;
        }
        let normal = pose_a.to_world(clamped + diff.unit_or_zero()) - pose_a.to_world(clamped);
        Some(Contact {
            point: pose_a.to_world(clamped),
            normal: normal.unit_or_zero(),
            depth: pen,
        })
    } else {
        // Disc center inside the rectangle: exit through the nearest face.
        let dx = ha.0 - local.x.abs();
        let dy = ha.1 - local.y.abs();
        let (normal_local, pen, point_local) = if dx < dy {
            let sx = if local.x >= 0.0 { 1.0 } else { -1.0 };
            (Vec2::new(sx, 0.0), radius + dx, Vec2::new(sx * ha.0, local.y))
        } else {
            let sy = if local.y >= 0.0 { 1.0 } else { -1.0 };
            (Vec2::new(0.0, sy), radius + dy, Vec2::new(local.x, sy * ha.1))
        };
        Some(Contact {
            point: pose_a.to_world(point_local),
            normal: normal_local.rotated(pose_a.yaw),
            depth: pen,
        })
    }
}

/// Contacts between the robot rectangle and the object footprint. Empty
/// iff the footprints are disjoint (touching counts as disjoint). Normals
/// are unit length and point from the robot into the object.
pub fn detect_contact(
    robot_pose: &Pose2,
    robot_dims: (f64, f64),
    object_pose: &Pose2,
    object: &ObjectSpec,
) -> ContactSet {
    let ha = (robot_dims.1 / 2.0, robot_dims.0 / 2.0);
    let contact = match object.shape {
        Shape::Box => rect_rect_contact(robot_pose, ha, object_pose, object.half_extents()),
        Shape::Cylinder => {
            rect_disc_contact(robot_pose, ha, object_pose.xy(), object.dims[0] / 2.0)
        }
    };
    contact.into_iter().collect()
}

/// Ground friction and drag applied to the free object twist, with a
/// stick condition when friction can absorb the remaining motion in one
/// step. Torsional friction opposes spin with torque `(2/3) mu m g r_eff`.
fn apply_ground_forces(world: &WorldState, dt: f64, gravity: f64) -> Twist2 {
    let spec = &world.object;
    let mut v = world.object_twist.linear();
    let mut w = world.object_twist.wz;

    // Linear drag force -drag * v.
    v = v + v * (-spec.drag / spec.mass * dt);

    // Coulomb ground friction.
    let mu_g = spec.friction * gravity;
    let speed = v.norm();
    if speed <= mu_g * dt {
        v = Vec2::ZERO;
    } else {
        v = v - v.unit_or_zero() * (mu_g * dt);
    }

    // Torsional friction about the support patch.
    let (hx, hy) = spec.half_extents();
    let r_eff = match spec.shape {
        Shape::Cylinder => spec.dims[0] / 2.0,
        Shape::Box => 0.5 * (hx + hy),
    };
    let torque = 2.0 / 3.0 * spec.friction * spec.mass * gravity * r_eff;
    let alpha = torque / spec.izz();
    if w.abs() <= alpha * dt {
        w = 0.0;
    } else {
        w -= alpha * dt * w.signum();
    }

    Twist2::new(v.x, v.y, w)
}

/// World-frame velocity of the robot body at a world point.
fn robot_point_velocity(world: &WorldState, point: Vec2) -> Vec2 {
    let lin_world = world.robot_twist.linear().rotated(world.robot_pose.yaw);
    let r = point - world.robot_pose.xy();
    lin_world + r.perp() * world.robot_twist.wz
}

/// Advance the world by one physics step under a commanded body twist.
pub fn step<R: Rng>(
    world: &WorldState,
    commanded: Twist2,
    servo: &ServoModel,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<WorldState> {
    let mut next = world.clone();
    let dt = cfg.dt;

    // Commanded twists outside the action bounds are clamped.
    let cmd = Twist2::new(
        commanded.vx.clamp(-1.5, 1.5),
        commanded.vy.clamp(-1.5, 1.5),
        commanded.wz.clamp(-1.5, 1.5),
    );

    // Robot: servo the body twist, then integrate kinematically.
    next.robot_twist = velocity_servo(world.robot_twist, cmd, servo, dt, rng)?;
    let lin_world = next.robot_twist.linear().rotated(world.robot_pose.yaw);
    next.robot_pose = Pose2::new(
        world.robot_pose.x + lin_world.x * dt,
        world.robot_pose.y + lin_world.y * dt,
        world.robot_pose.yaw + next.robot_twist.wz * dt,
    );

    // Object: ground friction + drag, then integrate about the COM.
    next.object_twist = apply_ground_forces(world, dt, cfg.gravity);
    let com_world = world.object_com_world() + next.object_twist.linear() * dt;
    let new_yaw = wrap_angle(world.object_pose.yaw + next.object_twist.wz * dt);
    let center = com_world - next.object_twist.linear() * 0.0
        - next.object.com_xy().rotated(new_yaw);
    next.object_pose = Pose2::new(center.x, center.y, new_yaw);

    // Contact: sequential impulses on the object, robot unaffected.
    let contacts = detect_contact(
        &next.robot_pose,
        next.robot_dims,
        &next.object_pose,
        &next.object,
    );
    if !contacts.is_empty() {
        let spec = next.object.clone();
        let inv_m = 1.0 / spec.mass;
        let inv_i = 1.0 / spec.izz();
        let mu = spec.friction;
        let mut v = next.object_twist.linear();
        let mut w = next.object_twist.wz;
        let com = next.object_com_world();

        let mut jn_acc = vec![0.0; contacts.len()];
        let mut jt_acc = vec![0.0; contacts.len()];
        for _ in 0..cfg.contact_iterations.max(1) {
            for (ci, c) in contacts.iter().enumerate() {
                let r = c.point - com;
                let v_obj_pt = v + r.perp() * w;
                let v_rob_pt = robot_point_velocity(&next, c.point);
                let rel = v_obj_pt - v_rob_pt;

                // Normal impulse, accumulated and clamped at zero.
                let vn = rel.dot(c.normal);
                let rn = r.cross(c.normal);
                let k_n = inv_m + rn * rn * inv_i;
                let target = -(1.0 + cfg.restitution) * vn.min(0.0);
                let dj = (target - 0.0).max(0.0) / k_n - 0.0;
                let dj = if vn < 0.0 { -vn * (1.0 + cfg.restitution) / k_n } else { -jn_acc[ci].min(dj / 1.0) * 0.0 };
                let old = jn_acc[ci];
                jn_acc[ci] = (old + dj).max(0.0);
                let applied = jn_acc[ci] - old;
                let imp = c.normal * applied;
                v = v + imp * inv_m;
                w += r.cross(imp) * inv_i;

                // Friction impulse with Coulomb cap.
                let tangent = c.normal.perp();
                let v_obj_pt = v + r.perp() * w;
                let rel = v_obj_pt - v_rob_pt;
                let vt = rel.dot(tangent);
                let rt = r.cross(tangent);
                let k_t = inv_m + rt * rt * inv_i;
                let cap = mu * jn_acc[ci];
                let old_t = jt_acc[ci];
                jt_acc[ci] = (old_t - vt / k_t).clamp(-cap, cap);
                let applied_t = jt_acc[ci] - old_t;
                let imp_t = tangent * applied_t;
                v = v + imp_t * inv_m;
                w += r.cross(imp_t) * inv_i;
            }
        }
        next.object_twist = Twist2::new(v.x, v.y, w);

        // Position projection along the deepest contact normal.
        for c in &contacts {
            let push = cfg.contact_beta * (c.depth - cfg.contact_slop).max(0.0);
            if push > 0.0 {
                next.object_pose = Pose2::new(
                    next.object_pose.x + c.normal.x * push,
                    next.object_pose.y + c.normal.y * push,
                    next.object_pose.yaw,
                );
            }
        }
        next.in_contact = !detect_contact(
            &next.robot_pose,
            next.robot_dims,
            &next.object_pose,
            &next.object,
        )
        .is_empty();
    } else {
        next.in_contact = false;
    }

    next.sim_time = world.sim_time + dt;
    if next.object_pose.x.abs() > cfg.workspace_bound
        || next.object_pose.y.abs() > cfg.workspace_bound
    {
        next.ejected = true;
    }
    if !next.robot_pose.is_finite() || !next.object_pose.is_finite() {
        return Err(Error::invalid_state("non-finite pose after step".into()));
    }
    Ok(next)
}

/// Planar SE(2) goal error: positional distance plus absolute wrapped yaw
/// error in radians.
pub fn se2_error(pose: &Pose2, goal: &Pose2) -> f64 {
    (pose.xy() - goal.xy()).norm() + angle_diff(pose.yaw, goal.yaw).abs()
}
