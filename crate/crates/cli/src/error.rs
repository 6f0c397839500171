use okounkov::geom::GeomError;
use okounkov::monomial::MonomialError;
use okounkov::semigroup::SemigroupError;
use okounkov::surface::SurfaceError;
use okounkov::toric::ToricError;
use thiserror::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or options.
    #[error("{0}")]
    Validation(String),
    /// Well-formed input violating a mathematical hypothesis.
    #[error("{message}")]
    Hypothesis { reason: &'static str, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hypothesis { .. } => EXIT_HYPOTHESIS,
            CliError::Validation(_) | CliError::Io { .. } => EXIT_VALIDATION,
        }
    }

    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Hypothesis { reason, .. } => reason,
            CliError::Validation(_) => "invalid_input",
            CliError::Io { .. } => "io_error",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": { "code": self.exit_code(), "reason": self.reason(), "message": self.to_string() }
        })
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    fn hypothesis(reason: &'static str, e: impl std::fmt::Display) -> Self {
        CliError::Hypothesis { reason, message: e.to_string() }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Unbounded => CliError::hypothesis("unbounded", e),
            GeomError::Infeasible => CliError::hypothesis("empty", e),
            GeomError::NotPointed => CliError::hypothesis("cone_not_pointed", e),
            GeomError::NotGraded(_) => CliError::hypothesis("cone_not_graded", e),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::Inadmissible(_) => CliError::hypothesis("inadmissible_semigroup", e),
            SemigroupError::GroupNotFull => CliError::hypothesis("group_not_full", e),
            SemigroupError::EmptySlice(_) => CliError::hypothesis("empty_slice", e),
            SemigroupError::DegreeTooSmall { .. } => CliError::hypothesis("degree_too_small", e),
            SemigroupError::NoTranslateInBox(_) => CliError::hypothesis("no_translate_in_box", e),
            SemigroupError::NotFinitelyGenerated => CliError::hypothesis("not_finitely_generated", e),
            SemigroupError::Geom(g) => g.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MonomialError> for CliError {
    fn from(e: MonomialError) -> Self {
        match e {
            MonomialError::NotInSimplex => CliError::hypothesis("not_in_simplex", e),
            MonomialError::NotPrimary(_) => CliError::hypothesis("not_primary", e),
            MonomialError::Geom(g) => g.into(),
            MonomialError::Semigroup(s) => s.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        match e {
            ToricError::NotBigOrComplete => CliError::hypothesis("not_big_or_complete", e),
            ToricError::EmptyPolytope => CliError::hypothesis("empty_polytope", e),
            ToricError::Geom(g) => g.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::NotBig => CliError::hypothesis("not_big", e),
            SurfaceError::NotPseudoEffective => CliError::hypothesis("not_pseudo_effective", e),
            SurfaceError::FlagCurveInBPlus => CliError::hypothesis("flag_curve_in_b_plus", e),
            SurfaceError::UnboundedDirection => CliError::hypothesis("unbounded_direction", e),
            SurfaceError::OutOfRange { .. } => CliError::hypothesis("t_out_of_range", e),
            SurfaceError::ModelInconsistent(_) => CliError::hypothesis("model_inconsistent", e),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
