/** Validation failure: a CSV or manifest exists but does not match the expected shape. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Filesystem failure: something could not be read or written at all. */
export class IoError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "IoError";
  }
}

export const EXIT_OK = 0;
export const EXIT_USAGE = 1;
export const EXIT_SCHEMA = 2;
export const EXIT_IO = 3;
