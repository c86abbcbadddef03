//! Element labels.
//!
//! Every element of every finite set in this crate is a structured label.
//! Limit and colimit constructions produce labels built from the labels of
//! their inputs (pairs for pullbacks and products, tagged injections for
//! coproducts, function graphs for exponentials), so structurally equal
//! constructions yield identical values rather than merely isomorphic ones.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    /// The element of a chosen one-point set.
    Unit,
    /// An opaque named token.
    Atom(String),
    /// An element of a product or pullback apex.
    Pair(Box<Label>, Box<Label>),
    /// Left coproduct injection.
    Left(Box<Label>),
    /// Right coproduct injection.
    Right(Box<Label>),
    /// The graph of a function, sorted by argument label.
    Graph(Vec<(Label, Label)>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn left(a: Label) -> Self {
        Label::Left(Box::new(a))
    }

    pub fn right(a: Label) -> Self {
        Label::Right(Box::new(a))
    }

    pub fn graph(mut entries: Vec<(Label, Label)>) -> Self {
        entries.sort();
        Label::Graph(entries)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unit => write!(f, "*"),
            Label::Atom(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
            Label::Left(a) => write!(f, "L:{a}"),
            Label::Right(a) => write!(f, "R:{a}"),
            Label::Graph(g) => {
                write!(f, "{{")?;
                for (i, (k, v)) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}>{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
