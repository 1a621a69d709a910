/** Figure recipe schema and validation (no external schema library). */

export type FigureKind = "heatmap" | "cuts" | "locus_overlay" | "trajectory";

export interface AxisSpec {
  column: string;
  label?: string;
}

export interface Recipe {
  kind: FigureKind;
  input: string;
  /** optional manifest JSON to cross-check the CSV schema version */
  manifest?: string;
  title?: string;
  width?: number;
  height?: number;
  x?: AxisSpec;
  y?: AxisSpec;
  value?: AxisSpec;
  /** cuts: one line per distinct value of this column */
  group_by?: string;
  /** trajectory: observable columns to draw (default cos_theta) */
  columns?: string[];
  /** locus_overlay: which fitted case to draw */
  overlay?: { case: "pi" | "1.75pi" };
  color_scale?: { min: number; max: number };
}

export class RecipeError extends Error {}

const KINDS: FigureKind[] = ["heatmap", "cuts", "locus_overlay", "trajectory"];
const KNOWN_KEYS = new Set([
  "kind", "input", "manifest", "title", "width", "height",
  "x", "y", "value", "group_by", "columns", "overlay", "color_scale",
]);

function requireAxis(recipe: Record<string, unknown>, key: string): void {
  const axis = recipe[key] as { column?: unknown } | undefined;
  if (!axis || typeof axis.column !== "string") {
    throw new RecipeError(`recipe needs '${key}.column'`);
  }
}

export function validateRecipe(raw: unknown): Recipe {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new RecipeError("recipe must be a JSON object");
  }
  const recipe = raw as Record<string, unknown>;
  for (const key of Object.keys(recipe)) {
    if (!KNOWN_KEYS.has(key)) {
      throw new RecipeError(`unknown recipe key '${key}'`);
    }
  }
  if (!KINDS.includes(recipe.kind as FigureKind)) {
    throw new RecipeError(
      `recipe kind must be one of ${KINDS.join(", ")}, got '${recipe.kind}'`,
    );
  }
  if (typeof recipe.input !== "string") {
    throw new RecipeError("recipe needs an 'input' CSV path");
  }
  const kind = recipe.kind as FigureKind;
  if (kind === "heatmap" || kind === "locus_overlay") {
    requireAxis(recipe, "x");
    requireAxis(recipe, "y");
    requireAxis(recipe, "value");
  }
  if (kind === "cuts") {
    requireAxis(recipe, "x");
    requireAxis(recipe, "value");
  }
  if (kind === "locus_overlay") {
    const overlay = recipe.overlay as { case?: unknown } | undefined;
    if (!overlay || (overlay.case !== "pi" && overlay.case !== "1.75pi")) {
      throw new RecipeError("locus_overlay needs overlay.case 'pi' or '1.75pi'");
    }
  }
  return recipe as unknown as Recipe;
}
