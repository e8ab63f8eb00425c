use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Truth {
    CertifiedTrue,
    CertifiedFalse,
    UnknownAtTruncation,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Truth::CertifiedTrue => "CertifiedTrue",
            Truth::CertifiedFalse => "CertifiedFalse",
            Truth::UnknownAtTruncation => "UnknownAtTruncation",
        };
        f.write_str(s)
    }
}

/// Three-valued result of a predicate with the certificate that backs it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub value: Truth,
    pub evidence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_seed: Option<u64>,
    /// Set when the certificate relies on generic random choices.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub probabilistic: bool,
    /// Numeric side result (nondegeneracy order, Segre index, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

impl Verdict {
    pub fn new(value: Truth, evidence: impl Into<String>) -> Self {
        Verdict {
            value,
            evidence: evidence.into(),
            random_seed: None,
            probabilistic: false,
            order: None,
        }
    }

    pub fn yes(evidence: impl Into<String>) -> Self {
        Self::new(Truth::CertifiedTrue, evidence)
    }

    pub fn no(evidence: impl Into<String>) -> Self {
        Self::new(Truth::CertifiedFalse, evidence)
    }

    pub fn unknown(evidence: impl Into<String>) -> Self {
        Self::new(Truth::UnknownAtTruncation, evidence)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.random_seed = Some(seed);
        self
    }

    pub fn probabilistic(mut self) -> Self {
        self.probabilistic = true;
        self
    }

    pub fn with_order(mut self, k: u32) -> Self {
        self.order = Some(k);
        self
    }

    pub fn is_true(&self) -> bool {
        self.value == Truth::CertifiedTrue
    }

    pub fn is_false(&self) -> bool {
        self.value == Truth::CertifiedFalse
    }

    pub fn is_unknown(&self) -> bool {
        self.value == Truth::UnknownAtTruncation
    }

    /// Logical negation; evidence is kept.
    pub fn negate(&self) -> Verdict {
        let value = match self.value {
            Truth::CertifiedTrue => Truth::CertifiedFalse,
            Truth::CertifiedFalse => Truth::CertifiedTrue,
            Truth::UnknownAtTruncation => Truth::UnknownAtTruncation,
        };
        Verdict {
            value,
            ..self.clone()
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.evidence)
    }
}
