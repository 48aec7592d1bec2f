use std::fmt;

use serde::{Deserialize, Serialize};

/// Canonical tag for cells, components and group elements.
///
/// Permutations are stored in one-line notation and subsets as sorted
/// ascending sequences, both 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Seq(Vec<i64>),
    Name(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Self {
        Label::Name(s.into())
    }

    pub fn seq<I, T>(items: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: TryInto<i64>,
        T::Error: fmt::Debug,
    {
        Label::Seq(items.into_iter().map(|x| x.try_into().unwrap()).collect())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Tuple(vec![a, b])
    }

    pub fn unit() -> Self {
        Label::Seq(Vec::new())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Name(s) => write!(f, "{s}"),
            Label::Seq(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Label::Tuple(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let l = Label::pair(Label::seq([1, 2]), Label::name("s"));
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"[[1,2],"s"]"#);
        let back: Label = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert_eq!(l.to_string(), "([1,2],s)");
    }
}
