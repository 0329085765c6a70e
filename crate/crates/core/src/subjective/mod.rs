//! Subjective test bookkeeping: session plans, subject screening, MOS and
//! the correlation of objective scores with MOS.

mod correlation;
mod mos;
mod outliers;
mod report;
mod session;
mod table;

pub use correlation::{fitted_rmse, linear_fit, pearson, ranks, rmse, spearman};
pub use mos::{mean_ci, mos, ClipMos, MosResult, Z_95};
pub use outliers::{
    clip_thresholds, is_rejected, screen_outliers, ClipThresholds, OutlierScreen, SubjectDiagnostics, REJECT_FRACTION,
    SYMMETRY_LIMIT,
};
pub use report::{
    build_report, BitratePoint, BitrateSeries, CategoryStats, CorrelationReport, MetricRow, ObjectiveSeries,
    ReportCategory, ReportOptions, ScatterPoint, ScatterSeries, HDR_VDP2_LABEL,
};
pub use session::{
    make_session_plan, EventKind, PresentationEvent, SessionPlan, GRAY_SECONDS, REFERENCE_SECONDS, TEST_SECONDS,
    VOTE_SECONDS,
};
pub use table::{Category, ClipInfo, ScoreTable, MAX_SCORE, MIN_SCORE};
