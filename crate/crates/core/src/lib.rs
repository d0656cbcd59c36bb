pub mod exactnum;
pub mod groups;
pub mod limits;
pub mod groupoids;
pub mod classfun;
pub mod charring;
pub mod qgraded;
pub mod tate;
pub mod moonshine;
