//! Deterministic synthetic fixtures: landmark faces and AU frames for
//! tests, benchmarks and desk-scale experiments without real datasets.
//!
//! The base face is mirror-symmetric by construction (exact coordinate
//! negation across x = 0), so its symmetry score is exactly zero. The
//! constructed variants pin specific score values for use as fixed points.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data_model::{AuFrame, LandmarkFace, Point};

/// Coordinates of the symmetric base face, indexed by landmark number.
///
/// x in [-50, 50] with the midline at x = 0; y grows downward with the
/// brows near -18 and the chin at 74. Eye centroids sit at (-27.5, 0) and
/// (27.5, 0), giving an inter-ocular distance of exactly 55.
const BASE_FACE: [(f64, f64); 68] = [
    // jaw 0-16
    (-50.0, 0.0),
    (-48.0, 12.0),
    (-45.0, 24.0),
    (-40.0, 36.0),
    (-33.0, 47.0),
    (-25.0, 57.0),
    (-16.0, 65.0),
    (-8.0, 71.0),
    (0.0, 74.0),
    (8.0, 71.0),
    (16.0, 65.0),
    (25.0, 57.0),
    (33.0, 47.0),
    (40.0, 36.0),
    (45.0, 24.0),
    (48.0, 12.0),
    (50.0, 0.0),
    // left brow 17-21
    (-42.0, -12.0),
    (-35.0, -16.0),
    (-27.0, -18.0),
    (-19.0, -17.0),
    (-11.0, -14.0),
    // right brow 22-26
    (11.0, -14.0),
    (19.0, -17.0),
    (27.0, -18.0),
    (35.0, -16.0),
    (42.0, -12.0),
    // nose bridge 27-30
    (0.0, -5.0),
    (0.0, 5.0),
    (0.0, 15.0),
    (0.0, 25.0),
    // nose bottom 31-35
    (-12.0, 31.0),
    (-6.0, 33.0),
    (0.0, 34.0),
    (6.0, 33.0),
    (12.0, 31.0),
    // left eye 36-41
    (-37.0, 0.0),
    (-31.0, -4.0),
    (-24.0, -4.0),
    (-18.0, 0.0),
    (-24.0, 4.0),
    (-31.0, 4.0),
    // right eye 42-47
    (18.0, 0.0),
    (24.0, -4.0),
    (31.0, -4.0),
    (37.0, 0.0),
    (31.0, 4.0),
    (24.0, 4.0),
    // outer mouth 48-59
    (-22.0, 52.0),
    (-14.0, 47.0),
    (-6.0, 45.0),
    (0.0, 44.0),
    (6.0, 45.0),
    (14.0, 47.0),
    (22.0, 52.0),
    (14.0, 58.0),
    (6.0, 61.0),
    (0.0, 62.0),
    (-6.0, 61.0),
    (-14.0, 58.0),
    // inner mouth 60-67
    (-18.0, 52.0),
    (-6.0, 50.0),
    (0.0, 50.0),
    (6.0, 50.0),
    (18.0, 52.0),
    (6.0, 55.0),
    (0.0, 55.0),
    (-6.0, 55.0),
];

/// A perfectly mirror-symmetric frontal face.
pub fn symmetric_face(id: &str, sensitive: u8) -> LandmarkFace {
    LandmarkFace {
        id: id.to_string(),
        points: BASE_FACE.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        sensitive,
    }
}

/// A symmetric face whose two default golden-ratio quotients equal `r1`
/// (face height / width) and `r2` (eye-chin / nose-chin) exactly.
pub fn face_with_ratios(id: &str, r1: f64, r2: f64) -> LandmarkFace {
    let mut face = symmetric_face(id, 0);
    let brow_y = -20.0;
    let chin_y = 100.0 * r1 + brow_y; // width is exactly 100
    face.points[21] = Point::new(-11.0, brow_y);
    face.points[22] = Point::new(11.0, brow_y);
    face.points[8] = Point::new(0.0, chin_y);
    // eye midpoint is exactly (0, 0), so eye-chin distance is chin_y
    face.points[33] = Point::new(0.0, chin_y - chin_y / r2);
    face
}

/// A face scoring exactly the golden ratio on both default ratio rules.
pub fn golden_ratio_face(id: &str) -> LandmarkFace {
    face_with_ratios(
        id,
        crate::geometry::GOLDEN_RATIO,
        crate::geometry::GOLDEN_RATIO,
    )
}

/// A face satisfying all three default neoclassical canons exactly.
pub fn canon_perfect_face(id: &str) -> LandmarkFace {
    let mut face = symmetric_face(id, 0);
    // nose width = inter-ocular distance = 55
    face.points[31] = Point::new(-27.5, 31.0);
    face.points[35] = Point::new(27.5, 31.0);
    // mouth width = 1.5 * 55
    face.points[48] = Point::new(-41.25, 52.0);
    face.points[54] = Point::new(41.25, 52.0);
    // face width = 4 * 55
    face.points[0] = Point::new(-110.0, 0.0);
    face.points[16] = Point::new(110.0, 0.0);
    face
}

/// Base face with every coordinate jittered uniformly in [-magnitude, magnitude].
pub fn jittered_face(rng: &mut impl Rng, id: &str, sensitive: u8, magnitude: f64) -> LandmarkFace {
    let mut face = symmetric_face(id, sensitive);
    for p in &mut face.points {
        p.x += rng.gen_range(-magnitude..=magnitude);
        p.y += rng.gen_range(-magnitude..=magnitude);
    }
    face
}

/// `n` deterministic jittered faces (seed 42, magnitude 3), alternating groups.
pub fn fixture_faces(n: usize) -> Vec<LandmarkFace> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..n)
        .map(|i| jittered_face(&mut rng, &format!("face{i:03}"), (i % 2) as u8, 3.0))
        .collect()
}

/// A random AU frame over `universe`: each AU present with probability 0.35;
/// present AUs get an intensity in [0.2, 5.0]. Some absent AUs carry a
/// nonzero raw intensity so presence gating stays exercised.
pub fn random_au_frame(rng: &mut impl Rng, id: &str, sensitive: u8, universe: &[u8]) -> AuFrame {
    let mut presence = std::collections::BTreeMap::new();
    let mut intensity = std::collections::BTreeMap::new();
    for &au in universe {
        let present = rng.gen_bool(0.35);
        presence.insert(au, u8::from(present));
        let value = if present {
            rng.gen_range(0.2..=5.0)
        } else if rng.gen_bool(0.3) {
            rng.gen_range(0.0..=5.0)
        } else {
            0.0
        };
        intensity.insert(au, value);
    }
    AuFrame {
        id: id.to_string(),
        presence,
        intensity,
        sensitive,
    }
}

/// `n` deterministic random frames over `universe`.
pub fn fixture_frames(seed: u64, n: usize, universe: &[u8]) -> Vec<AuFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| random_au_frame(&mut rng, &format!("frame{i:05}"), (i % 2) as u8, universe))
        .collect()
}
