# Generated by nnmig 0.1.0: pt/seq -> tf/seq
# pivot fnv1a64: 65f3b9e20192159a

import tensorflow as tf
from tensorflow import keras
from tensorflow.keras import layers

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


def build_Net():
    return keras.Sequential([
        layers.Input(shape=INPUT_SHAPE),
        layers.Conv2D(32, 3, activation='relu', name='conv2d'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d'),
        layers.Conv2D(64, 3, activation='relu', name='conv2d_1'),
        layers.MaxPooling2D(pool_size=2, name='maxpool2d_1'),
        layers.Conv2D(64, 3, activation='relu', name='conv2d_2'),
        layers.Flatten(name='flatten'),
        layers.Dense(64, activation='relu', name='linear'),
        layers.Dense(10, name='linear_1'),
    ], name='Net')


def train(model, x_train, y_train):
    model.compile(
        optimizer=keras.optimizers.Adam(learning_rate=0.001),
        loss=keras.losses.SparseCategoricalCrossentropy(from_logits=True),
        metrics=['accuracy'],
    )
    model.fit(x_train, y_train, batch_size=32, epochs=10)
    return model


def evaluate(model, x_test, y_test):
    return model.evaluate(x_test, y_test, batch_size=32)
