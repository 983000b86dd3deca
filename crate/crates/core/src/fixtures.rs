//! Small named systems with known solution structure.

use crate::poly::{clebsch_lines_system, parse_system, PolySystem};
use crate::scalar::Rational;

/// Two plane cubics meeting in 7 affine points, all real, two of them rational.
pub const CURVES7: &str = "vars: x, y
-7*x - 9*y - 10*x^2 + 17*x*y + 10*y^2 + 16*x^2*y - 17*x*y^2
2*x - 5*y + 5*x^2 + 5*x*y + 5*y^2 - 6*x^2*y - 6*x*y^2
";

/// Two conics with solutions `(±1, ±1)`.
pub const FOUR_POINTS: &str = "vars: x, y
x^2 + y^2 - 2
3*x^2 - y^2 - 2
";

/// Mixed volume 12 against a Bézout number of 16.
pub const MIXED_SUPPORTS: &str = "vars: x, y
1 + 2*x^3*y - 3*x*y^3
3 + 2*x^2 - y^2 + 5*x^2*y^2
";

/// Elbow position of a two-link planar arm with unit links reaching `(1, 1)`.
pub const ROBOT: &str = "vars: x, y
x^2 + y^2 - 1
(1 - x)^2 + (1 - y)^2 - 1
";

/// `(x - 1)(x - 2)⋯(x - 12)`.
pub const WILKINSON_ROOTS: std::ops::RangeInclusive<i64> = 1..=12;

/// Exponents of the hexagon support `{(1,0),(0,1),(2,0),(1,1),(0,2),(2,1),(1,2)}`.
pub const HEXAGON: [[i64; 2]; 7] = [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2], [2, 1], [1, 2]];

fn parse(text: &str) -> PolySystem<Rational> {
    parse_system(text).expect("fixture parses").system
}

pub fn curves7() -> PolySystem<Rational> {
    parse(CURVES7)
}

pub fn four_points() -> PolySystem<Rational> {
    parse(FOUR_POINTS)
}

pub fn mixed_supports() -> PolySystem<Rational> {
    parse(MIXED_SUPPORTS)
}

pub fn robot() -> PolySystem<Rational> {
    parse(ROBOT)
}

/// Lines on the Clebsch cubic surface, in the chart `a1, a2, b1, b2`.
pub fn clebsch_lines() -> PolySystem<Rational> {
    clebsch_lines_system()
}

/// The expanded product `(x - 1)(x - 2)⋯(x - 12)`.
pub fn wilkinson() -> PolySystem<Rational> {
    let factors: Vec<String> = WILKINSON_ROOTS.map(|k| format!("(x - {k})")).collect();
    parse(&format!("vars: x\n{}\n", factors.join("*")))
}
