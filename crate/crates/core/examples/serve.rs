//! Start the play API on a local port (default 8173) and exercise it once.
//!
//! cargo run --example serve -- [port]

use std::net::{Ipv4Addr, SocketAddr};
use std::sync::Arc;

use slingshot::service::{router, SessionStore, DEFAULT_PORT};

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let port = std::env::args().nth(1).and_then(|p| p.parse().ok()).unwrap_or(DEFAULT_PORT);
    let store = Arc::new(SessionStore::with_defaults());
    let listener = tokio::net::TcpListener::bind(SocketAddr::from((Ipv4Addr::LOCALHOST, port))).await?;
    println!("serving on http://{}", listener.local_addr()?);
    println!("try: curl -s -X POST localhost:{port}/sessions -d '{{\"pack\":\"default\"}}'");
    println!("     curl -s -X POST localhost:{port}/sessions/<id>/shots -d '{{\"angle_deg\":40,\"extension\":0.8}}'");
    axum::serve(listener, router(store)).await
}
