//! Normal-ordered differential operators in `x` and `∂`, and exponentials
//! of affine exponents acting on them by similarity.

mod explin;
mod expr;
mod op;

pub use explin::ExpLinOp;
pub use expr::{parse_xp, weyl_from_xp, XpExpr};
pub use op::{WeylOp, WeylTerm, DEGREE_LIMIT};

#[cfg(test)]
mod tests;
