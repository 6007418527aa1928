//! Built-in models.

use crate::model::{Model, ModelError};

pub const PG_AM20: &str = "\
# C2 x C4 and the dihedral group of order 16, glued along a fours group
# with the Frattini subgroup of the first factor sent to the centre of the second.
group G1 = (1 2), (3 4 5 6)
group G2 = (1 2 3 4 5 6 7 8), (2 8)(3 7)(4 6)
amalgam PG-AM20 = G1 * G2 along (1 2) -> (2 8)(3 7)(4 6), (3 5)(4 6) -> (1 5)(2 6)(3 7)(4 8)
subset M in PG-AM20 = <left:(3 4 5 6)>
subset N in PG-AM20 = <left:(1 2)(3 4 5 6)>
subset G1 in PG-AM20 = <left:(1 2), left:(3 4 5 6)>
subset G2 in PG-AM20 = <right:(1 2 3 4 5 6 7 8), right:(2 8)(3 7)(4 6)>
";

pub const GRP_S4: &str = "\
group S4 = (1 2), (1 2 3 4)
locality GRP-S4 = S4 prime 2 sylow auto delta seeds <(1 2)(3 4), (1 3)(2 4)>
subset V4 in GRP-S4 = <(1 2)(3 4), (1 3)(2 4)>
subset A4 in GRP-S4 = <(1 2 3), (1 2)(3 4)>
";

pub const GRP_C2XS4: &str = "\
group C2xS4 = (1 2), (3 4), (3 4 5 6)
locality GRP-C2xS4 = C2xS4 prime 2 sylow auto delta min-order 8
subset Z in GRP-C2xS4 = <(1 2)>
subset V4 in GRP-C2xS4 = <(3 4)(5 6), (3 5)(4 6)>
subset A4 in GRP-C2xS4 = <(3 4 5), (3 4)(5 6)>
subset S4 in GRP-C2xS4 = <(3 4), (3 4 5 6)>
";

pub const LOC_S5: &str = "\
group S5 = (1 2), (1 2 3 4 5)
locality LOC-S5 = S5 prime 2 sylow auto delta min-order 2
";

pub const NAMES: [&str; 4] = ["PG-AM20", "GRP-S4", "GRP-C2xS4", "LOC-S5"];

/// The built-in localities, in corpus order.
pub const LOCALITIES: [&str; 3] = ["GRP-S4", "GRP-C2xS4", "LOC-S5"];

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "PG-AM20" | "counterexample" => Some(PG_AM20),
        "GRP-S4" => Some(GRP_S4),
        "GRP-C2xS4" => Some(GRP_C2XS4),
        "LOC-S5" => Some(LOC_S5),
        _ => None,
    }
}

/// Canonical object name for a built-in name or alias.
pub fn canonical(name: &str) -> Option<&'static str> {
    match name {
        "counterexample" => Some("PG-AM20"),
        _ => NAMES.iter().copied().find(|n| *n == name),
    }
}

pub fn builtin(name: &str) -> Result<Model, ModelError> {
    let text = source(name).ok_or_else(|| ModelError::NoSuchObject(name.to_string()))?;
    Model::parse(text)
}
