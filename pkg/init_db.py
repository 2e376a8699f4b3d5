from models.db import cache_path, connect


def init_db(connection):
    with connection:
        connection.execute("""
        CREATE TABLE IF NOT EXISTS constants(
               kind TEXT NOT NULL CHECK(kind IN ('erdos', 'bernays', 'james', 'pall')),
               D INTEGER NOT NULL CHECK(D < 0),
               digits INTEGER NOT NULL CHECK(digits >= 1),
               value TEXT NOT NULL,         -- mpf mantissa and exponent, "man exp"
               error_bound TEXT NOT NULL,   -- same encoding
               terms_used INTEGER NOT NULL,
               inputs TEXT NOT NULL,        -- JSON
               created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
               PRIMARY KEY (kind, D, digits)
        )
        """)


if __name__ == "__main__":
    path = cache_path()
    if path is None:
        raise SystemExit("Set ERDOS_CACHE_DIR to create the result cache.")
    connection = connect(path)
    init_db(connection)
    connection.close()
    print(f"Result cache ready at {path}")
