//! HDR and high-bit-depth video I/O plus the color conversions every other
//! module builds on.

mod color;
mod frame;
mod manifest;
mod rgbe;
mod yuv;

pub use color::{
    denormalize, luminance, normalize, normalize_sequence, normalize_with, rgb_to_luminance, rgb_to_yuv, yuv_to_rgb,
    LumaScale, NormalizeMode, YuvMatrix, BT709_LUMA,
};
pub(crate) use frame::check_dims;
pub use frame::{CodePlane, HdrFrame, LumaPlane, LumaUnits, Plane};
pub use manifest::{
    dml_hdr_catalog, DatasetManifest, Environment, Lineage, Motion, SequenceManifest, SourceFormat, DML_HDR_BITRATES,
    DML_HDR_FPS, DML_HDR_RESOLUTION, DML_HDR_SEQUENCES, MANIFEST_SCHEMA_VERSION,
};
pub use rgbe::{read_rgbe, rgbe_decode_pixel, rgbe_encode_pixel, write_rgbe};
pub use yuv::{read_yuv12, write_yuv12, yuv12_frame_count, yuv12_frame_stride, Yuv12Frame, MAX_12BIT};
