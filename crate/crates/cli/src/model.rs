use std::fs;
use std::str::FromStr;

use f1kit_core::group::{
    additive_chain_model, constant_group, torus_group, FiniteGroupTable, GroupModel, GroupModelFile,
};
use f1kit_core::monoid::PointedMonoid;
use f1kit_core::reductive::{gl_model, grassmannian_model, parabolic_model, ParabolicType};
use f1kit_core::scheme::F1Scheme;
use f1kit_core::Error;

/// Parsed `--model` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Gl(usize),
    Parabolic(usize, Vec<usize>),
    Grassmannian(usize, usize),
    Torus(usize),
    Const(String),
    Ext(String),
    Monoid(String),
    Additive(usize),
}

pub const GRAMMAR: &str =
    "gl:n | parabolic:n:k1+k2+... | gr:k,n | torus:r | const:<group file> | ext:<group model file> | monoid:<monoid file> | additive:n";

fn num(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("expected a non-negative integer, got {s:?}"))
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| format!("model selector {s:?} has no ':'"))?;
        let path = |p: &str| {
            if p.is_empty() {
                Err("missing file path".to_string())
            } else {
                Ok(p.to_string())
            }
        };
        match kind {
            "gl" => Ok(Selector::Gl(num(rest)?)),
            "torus" => Ok(Selector::Torus(num(rest)?)),
            "additive" => Ok(Selector::Additive(num(rest)?)),
            "gr" => {
                let (k, n) = rest.split_once(',').ok_or("gr expects k,n")?;
                Ok(Selector::Grassmannian(num(k)?, num(n)?))
            }
            "parabolic" => {
                let (n, parts) = rest.split_once(':').ok_or("parabolic expects n:k1+k2+...")?;
                let parts = parts.split('+').map(num).collect::<Result<Vec<_>, _>>()?;
                let n = num(n)?;
                if parts.iter().sum::<usize>() != n {
                    return Err(format!("composition {parts:?} does not sum to {n}"));
                }
                Ok(Selector::Parabolic(n, parts))
            }
            "const" => Ok(Selector::Const(path(rest)?)),
            "ext" => Ok(Selector::Ext(path(rest)?)),
            "monoid" => Ok(Selector::Monoid(path(rest)?)),
            _ => Err(format!("unknown model kind {kind:?}")),
        }
    }
}

/// A built model.
#[allow(clippy::large_enum_variant)]
pub enum Model {
    Group(GroupModel),
    Scheme(F1Scheme),
    Monoid(PointedMonoid),
}

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Core(Error),
}

impl From<Error> for LoadError {
    fn from(e: Error) -> Self {
        LoadError::Core(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| LoadError::Core(Error::Parse(format!("{path}: {e}"))))
}

impl Selector {
    pub fn build(&self) -> Result<Model, LoadError> {
        Ok(match self {
            Selector::Gl(n) => Model::Group(gl_model(*n)?),
            Selector::Parabolic(_, parts) => Model::Group(parabolic_model(&ParabolicType::new(parts.clone())?)?),
            Selector::Grassmannian(k, n) => Model::Scheme(grassmannian_model(*k, *n)?),
            Selector::Torus(r) => Model::Group(torus_group(*r)),
            Selector::Additive(n) => Model::Group(additive_chain_model(*n)),
            Selector::Const(p) => Model::Group(constant_group(read_json::<FiniteGroupTable>(p)?)),
            Selector::Ext(p) => Model::Group(read_json::<GroupModelFile>(p)?.into_model()?),
            Selector::Monoid(p) => Model::Monoid(read_json::<PointedMonoid>(p)?),
        })
    }
}
