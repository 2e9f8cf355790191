//! Exit-code classification of library errors.

use serde::Serialize;
use serde_json::Value;
use unirat_core::algebra::AlgebraError;
use unirat_core::cubic::CubicError;
use unirat_core::points::PointsError;
use unirat_core::segre::SegreError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Exit 1: the input is well formed but the pipeline cannot proceed.
    Domain,
    /// Exit 2: malformed or inconsistent input.
    Input,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Domain => 1,
            ErrorClass::Input => 2,
        }
    }
}

/// The machine-readable error object of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorDoc {
    /// `algebra`, `cubic`, `segre`, `points` or `cli`.
    pub module: String,
    /// Variant name of the error that fired.
    pub error: String,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub class: ErrorClass,
    pub doc: ErrorDoc,
    /// Partial result attached to the report (a census, a classification).
    pub partial: Option<Value>,
}

impl Failure {
    fn new(class: ErrorClass, module: &str, debug: String, message: String) -> Self {
        let error: String = debug
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .collect();
        Failure {
            class,
            doc: ErrorDoc {
                module: module.into(),
                error,
                message,
            },
            partial: None,
        }
    }

    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Failure::new(ErrorClass::Input, "cli", kind.into(), message.into())
    }

    pub fn with_partial(mut self, partial: Value) -> Self {
        self.partial = Some(partial);
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.class.exit_code()
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::new(
            ErrorClass::Input,
            "algebra",
            format!("{e:?}"),
            e.to_string(),
        )
    }
}

impl From<CubicError> for Failure {
    fn from(e: CubicError) -> Self {
        use CubicError::*;
        let class = match &e {
            Algebra(inner) => return inner.clone().into(),
            NotACubicForm | ZeroPoint | PointNotOnHypersurface | WrongCharacteristic(_) => {
                ErrorClass::Input
            }
            _ => ErrorClass::Domain,
        };
        Failure::new(class, "cubic", format!("{e:?}"), e.to_string())
    }
}

impl From<SegreError> for Failure {
    fn from(e: SegreError) -> Self {
        use SegreError::*;
        let class = match &e {
            Cubic(inner) => return inner.clone().into(),
            Algebra(inner) => return inner.clone().into(),
            PointNotOnHypersurface | DimensionTooSmall(_) | InconsistentTable => ErrorClass::Input,
            _ => ErrorClass::Domain,
        };
        Failure::new(class, "segre", format!("{e:?}"), e.to_string())
    }
}

impl From<PointsError> for Failure {
    fn from(e: PointsError) -> Self {
        use PointsError::*;
        let class = match &e {
            Cubic(inner) => return inner.clone().into(),
            Algebra(inner) => return inner.clone().into(),
            WrongCharacteristic { .. } | WrongDimension { .. } | NotFinite | ShapeMismatch(_) => {
                ErrorClass::Input
            }
            _ => ErrorClass::Domain,
        };
        Failure::new(class, "points", format!("{e:?}"), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input("Json", e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input("Io", e.to_string())
    }
}
