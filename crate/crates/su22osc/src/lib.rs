pub mod boostcs;
pub mod exactnum;
pub mod fockaux;
pub mod liealg4;
pub mod massive;
pub mod oscrep;
pub mod report;
pub mod specfun;
