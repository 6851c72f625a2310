use serde::{Deserialize, Serialize};

/// World width in world-units.
pub const WORLD_WIDTH: f64 = 1200.0;
/// World height in world-units.
pub const WORLD_HEIGHT: f64 = 600.0;

/// Point or displacement in world coordinates (origin bottom-left, y up).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: Vec2) -> f64 {
        (*self - other).length()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Axis-aligned rectangle given by its minimum corner and extents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Vec2,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(min: Vec2, width: f64, height: f64) -> Self {
        Rect { min, width, height }
    }

    pub fn max(&self) -> Vec2 {
        Vec2::new(self.min.x + self.width, self.min.y + self.height)
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(self.min.x + self.width / 2.0, self.min.y + self.height / 2.0)
    }

    /// Closed containment test.
    pub fn contains(&self, p: Vec2) -> bool {
        let max = self.max();
        p.x >= self.min.x && p.x <= max.x && p.y >= self.min.y && p.y <= max.y
    }

    /// Euclidean distance from `p` to the rectangle, zero inside.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        let max = self.max();
        let dx = (self.min.x - p.x).max(0.0).max(p.x - max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - max.y);
        dx.hypot(dy)
    }
}

/// True when `p` lies within the world rectangle (closed).
pub fn in_world(p: Vec2) -> bool {
    p.x >= 0.0 && p.x <= WORLD_WIDTH && p.y >= 0.0 && p.y <= WORLD_HEIGHT
}
