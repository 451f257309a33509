import { readFileSync } from "node:fs";
import { join } from "node:path";

/** Raw bytes of a recorded service response, exactly as the wire carried
 * them. See scripts/record_fixtures.sh for how these were captured. The
 * test runner executes from the package root, so fixtures resolve from
 * the working directory. */
export function fixtureText(name: string): string {
  return readFileSync(join(process.cwd(), "tests", "fixtures", name), "utf8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}
