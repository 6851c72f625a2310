//! Level definitions and the level-pack document format.
//!
//! A pack is a JSON array of levels:
//!
//! ```text
//! [
//!   {
//!     "id": 0,
//!     "birds": 3,
//!     "slingshot": [140.0, 120.0],
//!     "pigs": [{ "c": [620.0, 15.0], "r": 15.0 }],
//!     "blocks": [{ "kind": "column", "min": [560.0, 0.0], "w": 12.0, "h": 80.0 }]
//!   }
//! ]
//! ```

use serde::{Deserialize, Serialize};

use super::geometry::{in_world, Rect, Vec2, WORLD_HEIGHT, WORLD_WIDTH};
use super::EngineError;

/// The eleven levels shipped with the crate.
pub const DEFAULT_PACK: &str = include_str!("../../levels/default.pack");

/// Name under which the bundled pack is registered.
pub const DEFAULT_PACK_ID: &str = "default";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pig {
    pub center: Vec2,
    pub radius: f64,
    pub alive: bool,
}

impl Pig {
    pub fn new(center: Vec2, radius: f64) -> Self {
        Pig {
            center,
            radius,
            alive: true,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.center.distance(p) <= self.radius
    }

    pub fn distance_to(&self, p: Vec2) -> f64 {
        (self.center.distance(p) - self.radius).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// Horizontal member.
    Beam,
    /// Vertical member.
    Column,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub rect: Rect,
    pub intact: bool,
}

impl Block {
    pub fn new(kind: BlockKind, min: Vec2, width: f64, height: f64) -> Self {
        Block {
            kind,
            rect: Rect::new(min, width, height),
            intact: true,
        }
    }

    pub fn center(&self) -> Vec2 {
        self.rect.center()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSpec {
    pub id: usize,
    pub birds: u32,
    pub pigs: Vec<Pig>,
    pub blocks: Vec<Block>,
    pub slingshot: Vec2,
}

impl LevelSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        let fail = |reason: String| EngineError::InvalidLevel {
            level: self.id,
            reason,
        };
        if self.birds == 0 {
            return Err(fail("level must have at least one bird".into()));
        }
        if self.pigs.is_empty() {
            return Err(fail("level must contain at least one pig".into()));
        }
        if !self.slingshot.is_finite() || !in_world(self.slingshot) {
            return Err(fail("slingshot outside the world".into()));
        }
        for (i, pig) in self.pigs.iter().enumerate() {
            if !pig.center.is_finite() || !pig.radius.is_finite() || pig.radius <= 0.0 {
                return Err(fail(format!("pig {i} has a non-positive or non-finite radius")));
            }
            if !pig.alive {
                return Err(fail(format!("pig {i} is not alive")));
            }
            let c = pig.center;
            let r = pig.radius;
            if c.x - r < 0.0 || c.x + r > WORLD_WIDTH || c.y - r < 0.0 || c.y + r > WORLD_HEIGHT {
                return Err(fail(format!("pig {i} extends outside the world")));
            }
        }
        for (i, block) in self.blocks.iter().enumerate() {
            let rect = block.rect;
            if !rect.min.is_finite() || !(rect.width > 0.0) || !(rect.height > 0.0) {
                return Err(fail(format!("block {i} must have positive width and height")));
            }
            if !block.intact {
                return Err(fail(format!("block {i} is not intact")));
            }
            match block.kind {
                BlockKind::Beam if rect.width < rect.height => {
                    return Err(fail(format!("block {i}: beam must be at least as wide as tall")))
                }
                BlockKind::Column if rect.height < rect.width => {
                    return Err(fail(format!("block {i}: column must be at least as tall as wide")))
                }
                _ => {}
            }
            if !in_world(rect.min) || !in_world(rect.max()) {
                return Err(fail(format!("block {i} extends outside the world")));
            }
        }
        Ok(())
    }
}

/// An ordered, validated list of levels.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelPack {
    levels: Vec<LevelSpec>,
}

impl LevelPack {
    pub fn new(levels: Vec<LevelSpec>) -> Result<Self, EngineError> {
        if levels.is_empty() {
            return Err(EngineError::Parse {
                line: 1,
                column: 1,
                message: "level pack contains no levels".into(),
            });
        }
        for (pos, level) in levels.iter().enumerate() {
            level.validate()?;
            if level.id != pos {
                return Err(EngineError::InvalidLevel {
                    level: level.id,
                    reason: format!("level id must equal its position {pos} in the pack"),
                });
            }
        }
        Ok(LevelPack { levels })
    }

    pub fn bundled() -> Self {
        load_level_pack(DEFAULT_PACK).expect("bundled level pack is valid")
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn get(&self, level: usize) -> Option<&LevelSpec> {
        self.levels.get(level)
    }

    pub fn last_index(&self) -> usize {
        self.levels.len() - 1
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PigDoc {
    c: [f64; 2],
    r: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    kind: BlockKind,
    min: [f64; 2],
    w: f64,
    h: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    id: usize,
    birds: u32,
    slingshot: [f64; 2],
    pigs: Vec<PigDoc>,
    #[serde(default)]
    blocks: Vec<BlockDoc>,
}

impl From<LevelDoc> for LevelSpec {
    fn from(doc: LevelDoc) -> Self {
        LevelSpec {
            id: doc.id,
            birds: doc.birds,
            slingshot: Vec2::new(doc.slingshot[0], doc.slingshot[1]),
            pigs: doc
                .pigs
                .into_iter()
                .map(|p| Pig::new(Vec2::new(p.c[0], p.c[1]), p.r))
                .collect(),
            blocks: doc
                .blocks
                .into_iter()
                .map(|b| Block::new(b.kind, Vec2::new(b.min[0], b.min[1]), b.w, b.h))
                .collect(),
        }
    }
}

impl From<&LevelSpec> for LevelDoc {
    fn from(level: &LevelSpec) -> Self {
        LevelDoc {
            id: level.id,
            birds: level.birds,
            slingshot: [level.slingshot.x, level.slingshot.y],
            pigs: level
                .pigs
                .iter()
                .map(|p| PigDoc {
                    c: [p.center.x, p.center.y],
                    r: p.radius,
                })
                .collect(),
            blocks: level
                .blocks
                .iter()
                .map(|b| BlockDoc {
                    kind: b.kind,
                    min: [b.rect.min.x, b.rect.min.y],
                    w: b.rect.width,
                    h: b.rect.height,
                })
                .collect(),
        }
    }
}

/// Parses and validates a level-pack document.
pub fn load_level_pack(text: &str) -> Result<LevelPack, EngineError> {
    let docs: Vec<LevelDoc> = serde_json::from_str(text).map_err(|e| EngineError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    LevelPack::new(docs.into_iter().map(LevelSpec::from).collect())
}

/// Canonical text form of a pack: pretty-printed JSON with a trailing newline.
pub fn serialize_level_pack(pack: &LevelPack) -> String {
    let docs: Vec<LevelDoc> = pack.levels.iter().map(LevelDoc::from).collect();
    let mut text = serde_json::to_string_pretty(&docs).expect("level docs serialize");
    text.push('\n');
    text
}
