use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Null,
    NotNull,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Null => "Null",
            Verdict::NotNull => "NotNull",
            Verdict::Unknown => "Unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rule that produced a verdict. `Undetermined` is reserved for Unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Justification {
    HausdorffBelow,
    HausdorffAbove,
    CantorSeries,
    ZooClosedForm,
    MeasurePositive,
    EmptyInteriorHighS,
    DeltaLowS,
    CheeseCertificate,
    FourierMembership,
    BoundaryFact,
    ProductBound,
    Basic,
    Undetermined,
}

impl Justification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Justification::HausdorffBelow => "HausdorffBelow",
            Justification::HausdorffAbove => "HausdorffAbove",
            Justification::CantorSeries => "CantorSeries",
            Justification::ZooClosedForm => "ZooClosedForm",
            Justification::MeasurePositive => "MeasurePositive",
            Justification::EmptyInteriorHighS => "EmptyInteriorHighS",
            Justification::DeltaLowS => "DeltaLowS",
            Justification::CheeseCertificate => "CheeseCertificate",
            Justification::FourierMembership => "FourierMembership",
            Justification::BoundaryFact => "BoundaryFact",
            Justification::ProductBound => "ProductBound",
            Justification::Basic => "Basic",
            Justification::Undetermined => "Undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullityVerdict {
    verdict: Verdict,
    justification: Justification,
    detail: String,
}

impl NullityVerdict {
    pub fn null(justification: Justification, detail: impl Into<String>) -> Self {
        Self::decided(Verdict::Null, justification, detail)
    }

    pub fn not_null(justification: Justification, detail: impl Into<String>) -> Self {
        Self::decided(Verdict::NotNull, justification, detail)
    }

    pub fn unknown(detail: impl Into<String>) -> Self {
        NullityVerdict {
            verdict: Verdict::Unknown,
            justification: Justification::Undetermined,
            detail: detail.into(),
        }
    }

    fn decided(verdict: Verdict, justification: Justification, detail: impl Into<String>) -> Self {
        assert!(justification != Justification::Undetermined, "decided verdicts need a rule");
        NullityVerdict {
            verdict,
            justification,
            detail: detail.into(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn justification(&self) -> Justification {
        self.justification
    }

    pub fn detail(&self) -> &str {
        &self.detail
    }

    pub fn is_null(&self) -> bool {
        self.verdict == Verdict::Null
    }

    pub fn is_not_null(&self) -> bool {
        self.verdict == Verdict::NotNull
    }
}

/// Serialized form of a verdict together with the question it answers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub verdict: Verdict,
    pub justification: Justification,
    pub detail: String,
    pub s: f64,
    pub p: f64,
    pub family: String,
}

impl VerdictRecord {
    pub fn new(v: &NullityVerdict, s: f64, p: f64, family: impl Into<String>) -> Self {
        VerdictRecord {
            verdict: v.verdict,
            justification: v.justification,
            detail: v.detail.clone(),
            s,
            p,
            family: family.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_has_no_rule() {
        let u = NullityVerdict::unknown("gap");
        assert_eq!(u.justification(), Justification::Undetermined);
        let j = serde_json::to_value(VerdictRecord::new(&u, 0.5, 2.0, "x")).unwrap();
        assert_eq!(j["verdict"], "Unknown");
        assert_eq!(j["justification"], "Undetermined");
    }

    #[test]
    #[should_panic]
    fn decided_needs_rule() {
        NullityVerdict::null(Justification::Undetermined, "");
    }
}
