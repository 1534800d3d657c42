//! The sixteen solvable extensions of the 5-dimensional nilradical `[X1,X2]=X4, [X1,X3]=X5`
//! by two outer derivations `X`, `Y`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{self, AlgebraElement, Covector, Matrix7, StructureConstants, DIM};

type Block5 = [[f64; 5]; 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
    G9,
    G10,
    G11,
    G12,
    G13,
    G14,
    G15,
    G16,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 16] = [
        FamilyTag::G1,
        FamilyTag::G2,
        FamilyTag::G3,
        FamilyTag::G4,
        FamilyTag::G5,
        FamilyTag::G6,
        FamilyTag::G7,
        FamilyTag::G8,
        FamilyTag::G9,
        FamilyTag::G10,
        FamilyTag::G11,
        FamilyTag::G12,
        FamilyTag::G13,
        FamilyTag::G14,
        FamilyTag::G15,
        FamilyTag::G16,
    ];

    /// 1-based row number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<FamilyTag> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    pub fn param_names(self) -> &'static [&'static str] {
        use FamilyTag::*;
        match self {
            G4 | G14 => &["lambda1", "lambda2"],
            G1 | G6 | G8 | G10 | G12 | G13 | G16 => &["lambda"],
            _ => &[],
        }
    }

    pub fn arity(self) -> usize {
        self.param_names().len()
    }

    pub fn constraint(self) -> &'static str {
        use FamilyTag::*;
        match self {
            G1 => "lambda in {0, 1}",
            G4 => "(lambda1, lambda2) != (-1, 0)",
            G13 | G16 => "lambda >= 0",
            G14 => "lambda2 >= 0",
            G6 | G8 | G10 | G12 => "lambda real",
            _ => "none",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.number())
    }
}

/// A family tag together with validated parameter values; serialized in the family-string form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyId {
    tag: FamilyTag,
    params: [f64; 2],
}

impl FamilyId {
    pub fn new(tag: FamilyTag, params: &[f64]) -> Result<Self> {
        if params.len() != tag.arity() {
            return Err(Error::InvalidParams(format!(
                "{tag} takes {} parameter(s), got {}",
                tag.arity(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParams(format!("{tag}: parameters must be finite")));
        }
        let mut p = [0.0; 2];
        p[..params.len()].copy_from_slice(params);
        let id = FamilyId { tag, params: p };
        id.validate()?;
        Ok(id)
    }

    /// Shorthand for a parameterless family; panics if `tag` takes parameters.
    pub fn plain(tag: FamilyTag) -> Self {
        Self::new(tag, &[]).expect("family takes parameters")
    }

    pub fn g4_00() -> Self {
        FamilyId {
            tag: FamilyTag::G4,
            params: [0.0, 0.0],
        }
    }

    fn validate(&self) -> Result<()> {
        use FamilyTag::*;
        let [a, b] = self.params;
        let ok = match self.tag {
            G1 => a == 0.0 || a == 1.0,
            G4 => !(a == -1.0 && b == 0.0),
            G13 | G16 => a >= 0.0,
            G14 => b >= 0.0,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{self}: violates {}",
                self.tag.constraint()
            )))
        }
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn params(&self) -> &[f64] {
        &self.params[..self.tag.arity()]
    }

    /// The single parameter `lambda` (or `lambda1` for two-parameter families).
    pub fn lambda(&self) -> f64 {
        self.params[0]
    }

    pub fn lambda2(&self) -> f64 {
        self.params[1]
    }

    /// The five families whose orbit geometry is worked out in closed form.
    pub fn studied(&self) -> Option<Studied> {
        match self.tag {
            FamilyTag::G2 => Some(Studied::G2),
            FamilyTag::G3 => Some(Studied::G3),
            FamilyTag::G4 if self.params == [0.0, 0.0] => Some(Studied::G4_00),
            FamilyTag::G9 => Some(Studied::G9),
            FamilyTag::G10 => Some(Studied::G10(self.params[0])),
            _ => None,
        }
    }

    pub fn require_studied(&self) -> Result<Studied> {
        self.studied()
            .ok_or_else(|| Error::InvalidFamily(self.to_string()))
    }

    pub fn is_exponential_tag(&self) -> bool {
        self.tag < FamilyTag::G13
    }

    /// Draws parameters uniformly from the valid region intersected with `[-2, 2]`.
    pub fn random<R: Rng + ?Sized>(tag: FamilyTag, rng: &mut R) -> Self {
        use FamilyTag::*;
        let params: Vec<f64> = match tag {
            G1 => vec![if rng.gen_bool(0.5) { 1.0 } else { 0.0 }],
            G4 => loop {
                let p = [rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)];
                if p != [-1.0, 0.0] {
                    break p.to_vec();
                }
            },
            G13 | G16 => vec![rng.gen_range(0.0..=2.0)],
            G14 => vec![rng.gen_range(-2.0..=2.0), rng.gen_range(0.0..=2.0)],
            G6 | G8 | G10 | G12 => vec![rng.gen_range(-2.0..=2.0)],
            _ => vec![],
        };
        FamilyId::new(tag, &params).expect("sampled parameters are valid")
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        for (k, (name, v)) in self.tag.param_names().iter().zip(self.params()).enumerate() {
            let sep = if k == 0 { ':' } else { ',' };
            write!(f, "{sep}{name}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Grammar: `TAG[":" key "=" value {"," key "=" value}]`, e.g. `G4:lambda1=0,lambda2=0`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |pos: usize, msg: String| Error::Parse { pos, msg };
        let (tag_str, rest, rest_pos) = match s.find(':') {
            Some(i) => (&s[..i], Some(&s[i + 1..]), i + 1),
            None => (s, None, s.len()),
        };
        let tag_trim = tag_str.trim();
        let num = tag_trim
            .strip_prefix('G')
            .or_else(|| tag_trim.strip_prefix('g'))
            .ok_or_else(|| parse_err(0, format!("expected family tag G1..G16, found {tag_str:?}")))?;
        let tag = num
            .parse::<usize>()
            .ok()
            .and_then(FamilyTag::from_number)
            .ok_or_else(|| parse_err(1, format!("unknown family tag {tag_str:?}")))?;

        let names = tag.param_names();
        let mut values: [Option<f64>; 2] = [None, None];
        if let Some(rest) = rest {
            let mut pos = rest_pos;
            for item in rest.split(',') {
                let eq = item
                    .find('=')
                    .ok_or_else(|| parse_err(pos, format!("expected key=value, found {item:?}")))?;
                let key = item[..eq].trim();
                let slot = names
                    .iter()
                    .position(|n| *n == key)
                    .ok_or_else(|| parse_err(pos, format!("{tag} has no parameter {key:?}")))?;
                if values[slot].is_some() {
                    return Err(parse_err(pos, format!("duplicate parameter {key:?}")));
                }
                let vpos = pos + eq + 1;
                let vstr = item[eq + 1..].trim();
                let v: f64 = vstr
                    .parse()
                    .map_err(|_| parse_err(vpos, format!("invalid number {vstr:?}")))?;
                values[slot] = Some(v);
                pos += item.len() + 1;
            }
        }
        let mut params = Vec::with_capacity(names.len());
        for (k, name) in names.iter().enumerate() {
            match values[k] {
                Some(v) => params.push(v),
                None => {
                    return Err(parse_err(s.len(), format!("missing parameter {name} for {tag}")))
                }
            }
        }
        FamilyId::new(tag, &params)
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The five families with explicit orbit formulas. `G10` carries its `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Studied {
    G2,
    G3,
    G4_00,
    G9,
    G10(f64),
}

impl Studied {
    pub fn id(self) -> FamilyId {
        match self {
            Studied::G2 => FamilyId::plain(FamilyTag::G2),
            Studied::G3 => FamilyId::plain(FamilyTag::G3),
            Studied::G4_00 => FamilyId::g4_00(),
            Studied::G9 => FamilyId::plain(FamilyTag::G9),
            Studied::G10(l) => FamilyId::new(FamilyTag::G10, &[l]).expect("any real lambda"),
        }
    }
}

/// The `(a_X, a_Y, [X,Y])` data of one row of the classification.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub a_x: Block5,
    pub a_y: Block5,
    pub xy_bracket: [f64; 5],
}

fn diag5(d: [f64; 5]) -> Block5 {
    let mut m = [[0.0; 5]; 5];
    for i in 0..5 {
        m[i][i] = d[i];
    }
    m
}

/// Block matrix `(s, S_ab, S_cd)` with `S_ab = [[a, b], [-b, a]]`.
fn rot5(s: f64, (a, b): (f64, f64), (c, d): (f64, f64)) -> Block5 {
    let mut m = [[0.0; 5]; 5];
    m[0][0] = s;
    m[1][1] = a;
    m[1][2] = b;
    m[2][1] = -b;
    m[2][2] = a;
    m[3][3] = c;
    m[3][4] = d;
    m[4][3] = -d;
    m[4][4] = c;
    m
}

/// Adds `coeff * E_ij` (1-based indices).
fn plus_e(mut m: Block5, i: usize, j: usize, coeff: f64) -> Block5 {
    m[i - 1][j - 1] += coeff;
    m
}

impl FamilySpec {
    pub fn of(id: &FamilyId) -> FamilySpec {
        use FamilyTag::*;
        let l = id.lambda();
        let l2 = id.lambda2();
        let mut xy = [0.0; 5];
        let (a_x, a_y) = match id.tag() {
            G1 => {
                xy[3] = l;
                (diag5([1.0, -1.0, 0.0, 0.0, 1.0]), diag5([0.0, 0.0, 1.0, 0.0, 1.0]))
            }
            G2 => (diag5([1.0, 0.0, 0.0, 1.0, 1.0]), diag5([0.0, 0.0, 1.0, 0.0, 1.0])),
            G3 => (diag5([0.0, 1.0, 0.0, 1.0, 0.0]), diag5([0.0, 0.0, 1.0, 0.0, 1.0])),
            G4 => (
                diag5([1.0, 0.0, l, 1.0, 1.0 + l]),
                diag5([0.0, 1.0, l2, 1.0, l2]),
            ),
            G5 => (
                diag5([0.0, 0.0, 1.0, 0.0, 1.0]),
                plus_e(diag5([1.0, 1.0, 0.0, 2.0, 1.0]), 1, 2, 1.0),
            ),
            G6 => (
                diag5([1.0, 1.0, l, 2.0, 1.0 + l]),
                plus_e(diag5([0.0, 0.0, 1.0, 0.0, 1.0]), 1, 2, 1.0),
            ),
            G7 => (
                diag5([0.0, 1.0, 1.0, 1.0, 1.0]),
                plus_e(diag5([1.0, 1.0, 0.0, 2.0, 1.0]), 2, 5, 1.0),
            ),
            G8 => (
                diag5([1.0, 1.0 + l, l, 2.0 + l, 1.0 + l]),
                plus_e(diag5([0.0, 1.0, 1.0, 1.0, 1.0]), 2, 5, 1.0),
            ),
            G9 => (
                diag5([0.0, 0.0, 1.0, 0.0, 1.0]),
                plus_e(diag5([0.0, 1.0, 0.0, 1.0, 0.0]), 3, 5, 1.0),
            ),
            G10 => (
                diag5([0.0, 1.0, l, 1.0, l]),
                plus_e(diag5([0.0, 0.0, 1.0, 0.0, 1.0]), 3, 5, 1.0),
            ),
            G11 => (
                diag5([0.0, 1.0, 1.0, 1.0, 1.0]),
                plus_e(plus_e(diag5([1.0, 0.0, 0.0, 1.0, 1.0]), 2, 3, 1.0), 4, 5, 1.0),
            ),
            G12 => (
                diag5([1.0, l, l, 1.0 + l, 1.0 + l]),
                plus_e(plus_e(diag5([0.0, 1.0, 1.0, 1.0, 1.0]), 2, 3, 1.0), 4, 5, 1.0),
            ),
            G13 => (
                diag5([0.0, 1.0, 1.0, 1.0, 1.0]),
                rot5(l, (0.0, 1.0), (l, 1.0)),
            ),
            G14 => (
                diag5([1.0, l, l, 1.0 + l, 1.0 + l]),
                rot5(0.0, (l2, 1.0), (l2, 1.0)),
            ),
            G15 => (
                rot5(0.0, (0.0, 1.0), (0.0, 1.0)),
                plus_e(plus_e(diag5([0.0, 1.0, 1.0, 1.0, 1.0]), 2, 5, 1.0), 3, 4, -1.0),
            ),
            G16 => (
                plus_e(rot5(0.0, (0.0, 1.0), (0.0, 1.0)), 2, 5, 1.0),
                plus_e(plus_e(diag5([0.0, 1.0, 1.0, 1.0, 1.0]), 2, 5, l), 3, 4, -l),
            ),
        };
        FamilySpec {
            a_x,
            a_y,
            xy_bracket: xy,
        }
    }
}

pub const IDX_X: usize = 5;
pub const IDX_Y: usize = 6;

/// Materializes the structure constants of a family.
pub fn build_algebra(id: &FamilyId) -> Result<StructureConstants> {
    id.validate()?;
    let spec = FamilySpec::of(id);
    let mut c = StructureConstants::zero();
    c.add_bracket(0, 1, 3, 1.0);
    c.add_bracket(0, 2, 4, 1.0);
    for (outer, a) in [(IDX_X, &spec.a_x), (IDX_Y, &spec.a_y)] {
        // coefficient of X_i in [outer, X_j] is a[j][i]
        for j in 0..5 {
            for i in 0..5 {
                if a[j][i] != 0.0 {
                    c.add_bracket(outer, j, i, a[j][i]);
                }
            }
        }
    }
    for (k, &v) in spec.xy_bracket.iter().enumerate() {
        if v != 0.0 {
            c.add_bracket(IDX_X, IDX_Y, k, v);
        }
    }
    Ok(c)
}

/// Dimension of `[G, G]`, computed as the rank of all basis brackets.
pub fn derived_ideal_dimension(id: &FamilyId) -> Result<usize> {
    let c = build_algebra(id)?;
    let mut rows = Vec::new();
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            rows.push(c.basis_bracket(i, j).to_vec());
        }
    }
    Ok(lie::numerical_rank(&rows, lie::RANK_TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyTemplate {
    pub tag: FamilyTag,
    pub arity: usize,
    pub param_names: Vec<&'static str>,
    pub constraint: &'static str,
}

pub fn list_families() -> Vec<FamilyTemplate> {
    FamilyTag::ALL
        .iter()
        .map(|&tag| FamilyTemplate {
            tag,
            arity: tag.arity(),
            param_names: tag.param_names().to_vec(),
            constraint: tag.constraint(),
        })
        .collect()
}

/// A family bundled with its structure constants.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub id: FamilyId,
    pub c: StructureConstants,
}

impl Algebra {
    pub fn new(id: FamilyId) -> Result<Self> {
        let c = build_algebra(&id)?;
        Ok(Algebra { id, c })
    }

    pub fn ad(&self, u: &AlgebraElement) -> Matrix7 {
        lie::ad_matrix(&self.c, u)
    }

    pub fn bracket(&self, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
        lie::bracket(&self.c, u, v)
    }

    pub fn kirillov(&self, f: &Covector) -> Matrix7 {
        lie::kirillov_form(&self.c, f)
    }
}
