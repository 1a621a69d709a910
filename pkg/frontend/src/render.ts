#!/usr/bin/env node
/**
 * render --recipe <path> --out <path>
 *
 * Reads a figure recipe (JSON), loads the referenced CSV, writes the SVG
 * figure and a JSON sidecar recording the recipe next to it. Rendering is a
 * pure function of the CSV bytes and the recipe, so reruns are
 * byte-identical.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { parseCsv, SchemaError } from "./csv.js";
import { buildFigure } from "./figures.js";
import { RecipeError, validateRecipe } from "./recipe.js";

export function renderToString(recipeText: string, csvText: string): string {
  const recipe = validateRecipe(JSON.parse(recipeText));
  return buildFigure(parseCsv(csvText), recipe);
}

export function renderFiles(recipePath: string, outPath: string): void {
  const recipeText = readFileSync(recipePath, "utf-8");
  const recipe = validateRecipe(JSON.parse(recipeText));
  const csvPath = resolve(dirname(recipePath), recipe.input);
  if (recipe.manifest !== undefined) {
    const manifestPath = resolve(dirname(recipePath), recipe.manifest);
    const manifest = JSON.parse(readFileSync(manifestPath, "utf-8"));
    if (manifest.schema_version !== 1) {
      throw new SchemaError(
        `unsupported CSV schema version ${manifest.schema_version}; this renderer reads version 1`,
      );
    }
  }
  const table = parseCsv(readFileSync(csvPath, "utf-8"));
  const svg = buildFigure(table, recipe);
  writeFileSync(outPath, svg);
  writeFileSync(
    `${outPath}.recipe.json`,
    JSON.stringify({ recipe, input_csv: recipe.input }, null, 2) + "\n",
  );
}

function main(argv: string[]): number {
  let recipePath: string | undefined;
  let outPath: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--recipe") recipePath = argv[++i];
    else if (argv[i] === "--out") outPath = argv[++i];
    else {
      console.error(`render: unknown argument '${argv[i]}'`);
      return 2;
    }
  }
  if (!recipePath || !outPath) {
    console.error("usage: render --recipe <recipe.json> --out <figure.svg>");
    return 2;
  }
  try {
    renderFiles(recipePath, outPath);
  } catch (err) {
    if (err instanceof RecipeError || err instanceof SchemaError) {
      console.error(`render: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${outPath}`);
  return 0;
}

// invoked directly (not imported by tests)
if (process.argv[1] && process.argv[1].endsWith("render.js")) {
  process.exit(main(process.argv.slice(2)));
}
