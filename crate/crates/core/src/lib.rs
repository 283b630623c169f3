pub mod certify;
pub mod constructions;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod reproduce;
pub mod sdp;
